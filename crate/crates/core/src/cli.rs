//! Command-line interface.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::assemble::{decompose, ell_bound, Certificate, Decomposition};
use crate::embedding::{euler_genus, parse_embedding, trace_faces, write_embedding, EmbeddedMultigraph};
use crate::error::{Error, Result};
use crate::frontends::{
    map_to_frame, oneplanar_to_frame, parse_labelled_map, parse_one_plane, write_labelled_map,
    write_one_plane,
};
use crate::generators;
use crate::verify::verify;

#[derive(Debug, Parser)]
#[command(name = "framedprod", version, about = "Product structure of framed graphs on surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Toroidal,
    Tri,
    Framed,
    Map,
    Oneplane,
    K5,
    K6,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose embedded frames and write verified certificates.
    Decompose {
        /// Input embedding(s); `-` or nothing reads stdin.
        #[arg(long = "in")]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        d: usize,
        /// Certificate output (single input only); stdout by default.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads when several inputs are given; each writes `<input>.cert`.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write an SVG diagram of H and the layering.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check a certificate against an embedding.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Comma-separated parameters: toroidal rows,cols; tri n; framed n,d,g; map n,d; oneplane n.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a labelled map into a frame (or a certificate with --decompose).
    Map {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        decompose: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a 1-plane drawing into a frame (or a certificate with --decompose).
    Oneplanar {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        decompose: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print counts, genus and face lengths; with --d also the achieved clique size.
    Stats {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// Streams used by [`run_with`].
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs the CLI on the process streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (mut i, mut o, mut e) = (std::io::stdin(), std::io::stdout(), std::io::stderr());
    run_with(args, &mut Io { stdin: &mut i, stdout: &mut o, stderr: &mut e })
}

pub fn run_with<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(io.stderr, "{e}");
            return code;
        }
    };
    match dispatch(cli.command, io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: Option<&Path>, io: &mut Io<'_>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io.stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, io: &mut Io<'_>) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            io.stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn params(s: &str, want: usize, usage: &str) -> Result<Vec<usize>> {
    let v: Vec<usize> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::Input(format!("bad parameter '{t}'"))))
        .collect::<Result<_>>()?;
    if v.len() != want {
        return Err(Error::Input(format!("expected --params {usage}")));
    }
    Ok(v)
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Result<i32> {
    match cmd {
        Command::Decompose { inputs, d, out, jobs, svg } => {
            if inputs.len() > 1 {
                if out.is_some() || svg.is_some() {
                    return Err(Error::Input("--out and --svg need a single input".into()));
                }
                return decompose_many(&inputs, d, jobs, io);
            }
            let text = read_input(inputs.first().map(PathBuf::as_path), io)?;
            let g = parse_embedding(&text)?;
            let dec = decompose(&g, d)?;
            if let Some(p) = svg {
                write_output(Some(&p), &render_svg(&dec), io)?;
            }
            write_output(out.as_deref(), &dec.certificate.to_text(), io)?;
            let _ = writeln!(
                io.stderr,
                "ell {} bound {} |V(H)| {} width {}",
                dec.stats.ell, dec.stats.ell_bound, dec.stats.h_nodes, dec.stats.td_width
            );
            Ok(0)
        }
        Command::Verify { input, cert } => {
            let g = parse_embedding(&read_input(Some(&input), io)?)?;
            let c = Certificate::parse(&read_input(Some(&cert), io)?)?;
            let rep = verify(&g, c.d, &c);
            if rep.is_ok() {
                writeln!(io.stdout, "PASS")?;
                Ok(0)
            } else {
                for l in rep.lines() {
                    writeln!(io.stdout, "{l}")?;
                }
                Ok(2)
            }
        }
        Command::Gen { family, params: p, seed, out } => {
            let text = match family {
                Family::Toroidal => {
                    let v = params(&p, 2, "rows,cols")?;
                    write_embedding(&generators::gen_toroidal_grid(v[0], v[1])?)
                }
                Family::Tri => {
                    let v = params(&p, 1, "n")?;
                    write_embedding(&generators::gen_plane_triangulation(v[0], seed)?)
                }
                Family::Framed => {
                    let v = params(&p, 3, "n,d,g")?;
                    write_embedding(&generators::gen_framed(v[0], v[1], v[2], seed)?)
                }
                Family::Map => {
                    let v = params(&p, 2, "n,d")?;
                    let (g, l) = generators::gen_labelled_map(v[0], v[1], seed)?;
                    write_labelled_map(&g, &l)
                }
                Family::Oneplane => {
                    let v = params(&p, 1, "n")?;
                    let (g, x) = generators::gen_one_plane(v[0], seed)?;
                    write_one_plane(&g, &x)
                }
                Family::K5 => {
                    let (g, x) = generators::k5_one_plane()?;
                    write_one_plane(&g, &x)
                }
                Family::K6 => {
                    let (g, x) = generators::k6_one_plane()?;
                    write_one_plane(&g, &x)
                }
            };
            write_output(out.as_deref(), &text, io)?;
            Ok(0)
        }
        Command::Map { input, d, decompose: dec, out } => {
            let (g, labels) = parse_labelled_map(&read_input(input.as_deref(), io)?)?;
            let mf = map_to_frame(&g, &labels, d)?;
            let _ = writeln!(
                io.stderr,
                "nations {} map edges {} frame n {} m {}",
                mf.nations.len(),
                mf.map_edges.len(),
                mf.frame.num_vertices(),
                mf.frame.num_edges()
            );
            frame_or_certificate(&mf.frame, d, dec, out.as_deref(), io)
        }
        Command::Oneplanar { input, decompose: dec, out } => {
            let (g, xs) = parse_one_plane(&read_input(input.as_deref(), io)?)?;
            let f = oneplanar_to_frame(&g, &xs)?;
            let _ = writeln!(
                io.stderr,
                "edges {} crossings {} frame n {} m {}",
                f.graph_edges.len(),
                xs.len(),
                f.frame.num_vertices(),
                f.frame.num_edges()
            );
            frame_or_certificate(&f.frame, 4, dec, out.as_deref(), io)
        }
        Command::Stats { input, d, svg } => {
            let g = parse_embedding(&read_input(input.as_deref(), io)?)?;
            let text = stats_text(&g, d, svg.as_deref(), io)?;
            io.stdout.write_all(text.as_bytes())?;
            Ok(0)
        }
    }
}

fn frame_or_certificate(
    frame: &EmbeddedMultigraph,
    d: usize,
    dec: bool,
    out: Option<&Path>,
    io: &mut Io<'_>,
) -> Result<i32> {
    let text = if dec {
        let r = decompose(frame, d)?;
        let _ = writeln!(io.stderr, "ell {} bound {}", r.stats.ell, r.stats.ell_bound);
        r.certificate.to_text()
    } else {
        write_embedding(frame)
    };
    write_output(out, &text, io)?;
    Ok(0)
}

fn decompose_many(inputs: &[PathBuf], d: usize, jobs: usize, io: &mut Io<'_>) -> Result<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let results: Vec<(PathBuf, Result<usize>)> = pool.install(|| {
        inputs
            .par_iter()
            .map(|p| {
                let r = (|| {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    let dec = decompose(&parse_embedding(&text)?, d)?;
                    let mut target = p.clone().into_os_string();
                    target.push(".cert");
                    std::fs::write(&target, dec.certificate.to_text())?;
                    Ok(dec.stats.ell)
                })();
                (p.clone(), r)
            })
            .collect()
    });
    let mut code = 0;
    for (p, r) in results {
        match r {
            Ok(ell) => writeln!(io.stdout, "{} ok ell {ell}", p.display())?,
            Err(e) => {
                writeln!(io.stdout, "{} error {e}", p.display())?;
                code = code.max(e.exit_code());
            }
        }
    }
    Ok(code)
}

fn stats_text(
    g: &EmbeddedMultigraph,
    d: Option<usize>,
    svg: Option<&Path>,
    io: &mut Io<'_>,
) -> Result<String> {
    let faces = trace_faces(g);
    let genus = euler_genus(g)?;
    let mut s = String::new();
    let _ = writeln!(s, "n {}", g.num_vertices());
    let _ = writeln!(s, "m {}", g.num_edges());
    let _ = writeln!(s, "f {}", faces.len());
    let _ = writeln!(s, "g {genus}");
    let mut hist = std::collections::BTreeMap::new();
    for f in &faces.faces {
        *hist.entry(f.len()).or_insert(0usize) += 1;
    }
    for (len, count) in hist {
        let _ = writeln!(s, "faces_of_length {len} {count}");
    }
    if let Some(d) = d {
        let dec = decompose(g, d)?;
        let _ = writeln!(s, "d {d}");
        let _ = writeln!(s, "ell {}", dec.stats.ell);
        let _ = writeln!(s, "bound {}", ell_bound(genus, d));
        let _ = writeln!(s, "h_nodes {}", dec.stats.h_nodes);
        let _ = writeln!(s, "h_edges {}", dec.stats.h_edges);
        let _ = writeln!(s, "td_width {}", dec.stats.td_width);
        if let Some(p) = svg {
            write_output(Some(p), &render_svg(&dec), io)?;
        }
    }
    Ok(s)
}

/// Static diagram: one column per H-node, one row per layer, each cell
/// shaded by how many vertices it holds; H-edges are arcs above the grid.
pub fn render_svg(dec: &Decomposition) -> String {
    let c = &dec.certificate;
    let cols = c.h.num_vertices().max(1);
    let rows = c.map.iter().map(|m| m.1 + 1).max().unwrap_or(1);
    let cell = 12usize;
    let top = 40usize;
    let (w, h) = (cols * cell + 20, top + rows * cell + 20);
    let mut count = vec![0usize; cols * rows];
    for &(a, l, _) in &c.map {
        count[l * cols + a] += 1;
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for (u, v) in c.h.edges() {
        let (x1, x2) = (10 + u * cell + cell / 2, 10 + v * cell + cell / 2);
        let mid = (x1 + x2) / 2;
        let lift = top.saturating_sub(5).min(5 + (x2 - x1) / 4);
        let _ = writeln!(
            s,
            r#"<path d="M {x1} {top} Q {mid} {} {x2} {top}" fill="none" stroke="gray" stroke-width="0.5"/>"#,
            top - lift
        );
    }
    for l in 0..rows {
        for a in 0..cols {
            let k = count[l * cols + a];
            if k == 0 {
                continue;
            }
            let shade = 230usize.saturating_sub(40 * k.min(5));
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="rgb({shade},{shade},255)" stroke="black" stroke-width="0.3"><title>node {a} layer {l}: {k}</title></rect>"#,
                10 + a * cell,
                top + l * cell
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
