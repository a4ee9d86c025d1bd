//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use framedprod::assemble::{self, Certificate as CoreCertificate};
use framedprod::embedding::{self, EmbeddedMultigraph};
use framedprod::{frontends, generators, verify as core_verify, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Input(_) | Error::Domain(_) | Error::InvalidFrame(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// A graph with a rotation system.
#[pyclass(name = "Embedding", frozen)]
struct PyEmbedding {
    inner: EmbeddedMultigraph,
}

#[pymethods]
impl PyEmbedding {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = embedding::parse_embedding(text).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_text(&self) -> String {
        embedding::write_embedding(&self.inner)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edge_list().into_iter().map(|(u, v, _)| (u, v)).collect()
    }

    /// Vertex walk of every face.
    fn faces(&self) -> Vec<Vec<usize>> {
        embedding::trace_faces(&self.inner).vertex_walks
    }

    fn genus(&self) -> PyResult<usize> {
        embedding::euler_genus(&self.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Embedding(n={}, m={})", self.inner.num_vertices(), self.inner.num_edges())
    }
}

#[pyclass(name = "Certificate", frozen)]
struct PyCertificate {
    inner: CoreCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: CoreCertificate::parse(text).map_err(to_py)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn ell(&self) -> usize {
        self.inner.ell
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    fn h_edges(&self) -> Vec<(usize, usize)> {
        self.inner.h.edges().collect()
    }

    fn td_width(&self) -> usize {
        self.inner.td.width()
    }

    /// `(node, layer, copy)` for every vertex.
    fn mapping(&self) -> Vec<(usize, usize, usize)> {
        self.inner.map.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(n={}, g={}, d={}, ell={}, h_nodes={})",
            self.inner.n,
            self.inner.genus,
            self.inner.d,
            self.inner.ell,
            self.inner.h.num_vertices()
        )
    }
}

/// Decomposes a frame; the certificate is verified before it is returned.
#[pyfunction]
fn decompose(g: &PyEmbedding, d: usize) -> PyResult<PyCertificate> {
    let dec = assemble::decompose(&g.inner, d).map_err(to_py)?;
    Ok(PyCertificate { inner: dec.certificate })
}

/// Returns the list of failed checks; empty means the certificate is valid.
#[pyfunction]
fn verify(g: &PyEmbedding, cert: &PyCertificate) -> Vec<String> {
    core_verify::verify(&g.inner, cert.inner.d, &cert.inner).lines()
}

#[pyfunction]
fn ell_bound(g: usize, d: usize) -> usize {
    assemble::ell_bound(g, d)
}

#[pyfunction]
fn toroidal_grid(rows: usize, cols: usize) -> PyResult<PyEmbedding> {
    Ok(PyEmbedding { inner: generators::gen_toroidal_grid(rows, cols).map_err(to_py)? })
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn plane_triangulation(n: usize, seed: u64) -> PyResult<PyEmbedding> {
    Ok(PyEmbedding { inner: generators::gen_plane_triangulation(n, seed).map_err(to_py)? })
}

#[pyfunction]
#[pyo3(signature = (n, d, g, seed=0))]
fn framed(n: usize, d: usize, g: usize, seed: u64) -> PyResult<PyEmbedding> {
    Ok(PyEmbedding { inner: generators::gen_framed(n, d, g, seed).map_err(to_py)? })
}

/// Parses a labelled map and returns its frame.
#[pyfunction]
fn map_frame(text: &str, d: usize) -> PyResult<PyEmbedding> {
    let (g, labels) = frontends::parse_labelled_map(text).map_err(to_py)?;
    let mf = frontends::map_to_frame(&g, &labels, d).map_err(to_py)?;
    Ok(PyEmbedding { inner: mf.frame })
}

/// Parses a 1-plane drawing and returns its frame (d = 4).
#[pyfunction]
fn one_plane_frame(text: &str) -> PyResult<PyEmbedding> {
    let (g, xs) = frontends::parse_one_plane(text).map_err(to_py)?;
    let f = frontends::oneplanar_to_frame(&g, &xs).map_err(to_py)?;
    Ok(PyEmbedding { inner: f.frame })
}

#[pyfunction]
#[pyo3(signature = (n, d, seed=0))]
fn labelled_map_text(n: usize, d: usize, seed: u64) -> PyResult<String> {
    let (g, l) = generators::gen_labelled_map(n, d, seed).map_err(to_py)?;
    Ok(frontends::write_labelled_map(&g, &l))
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn one_plane_text(n: usize, seed: u64) -> PyResult<String> {
    let (g, x) = generators::gen_one_plane(n, seed).map_err(to_py)?;
    Ok(frontends::write_one_plane(&g, &x))
}

#[pymodule]
fn framedprod_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEmbedding>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(ell_bound, m)?)?;
    m.add_function(wrap_pyfunction!(toroidal_grid, m)?)?;
    m.add_function(wrap_pyfunction!(plane_triangulation, m)?)?;
    m.add_function(wrap_pyfunction!(framed, m)?)?;
    m.add_function(wrap_pyfunction!(map_frame, m)?)?;
    m.add_function(wrap_pyfunction!(one_plane_frame, m)?)?;
    m.add_function(wrap_pyfunction!(labelled_map_text, m)?)?;
    m.add_function(wrap_pyfunction!(one_plane_text, m)?)?;
    Ok(())
}
