use framedprod::cli::{run_with, Io};

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("framedprod").chain(args.iter().copied());
    let code = run_with(argv, &mut Io { stdin: &mut input, stdout: &mut out, stderr: &mut err });
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("framedprod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn toroidal_pipe_into_decompose() {
    let (c, grid, _) = run(&["gen", "--family", "toroidal", "--params", "4,4"], "");
    assert_eq!(c, 0);
    let (c, cert, err) = run(&["decompose", "--d", "4"], &grid);
    assert_eq!(c, 0, "{err}");
    assert!(cert.starts_with("cert n 16 g 2 d 4"));
    let ell: usize = err.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(ell <= 8);
}

#[test]
fn triangulation_stats_report_ell() {
    let (_, tri, _) = run(&["gen", "--family", "tri", "--params", "120", "--seed", "5"], "");
    let (c, out, _) = run(&["stats", "--d", "3"], &tri);
    assert_eq!(c, 0);
    assert!(out.contains("g 0\n"));
    assert!(out.contains(&format!("faces_of_length 3 {}\n", 2 * 120 - 4)));
    let ell: usize = out.lines().find_map(|l| l.strip_prefix("ell ")).unwrap().parse().unwrap();
    assert!(ell <= 3);
}

#[test]
fn verify_accepts_then_rejects_corruption() {
    let emb = tmp("grid.emg");
    let cert = tmp("grid.cert");
    let (_, grid, _) = run(&["gen", "--family", "toroidal", "--params", "3,5"], "");
    std::fs::write(&emb, &grid).unwrap();
    let e = emb.to_str().unwrap();
    let (c, _, _) = run(&["decompose", "--in", e, "--d", "4", "--out", cert.to_str().unwrap()], "");
    assert_eq!(c, 0);
    let (c, out, _) = run(&["verify", "--in", e, "--cert", cert.to_str().unwrap()], "");
    assert_eq!((c, out.as_str()), (0, "PASS\n"));

    let text = std::fs::read_to_string(&cert).unwrap();
    let bad: String = text
        .lines()
        .filter(|l| !l.starts_with("LAYERS") && !l.starts_with("l "))
        .map(|l| if l.starts_with("m 4 ") { "m 4 0 9 0".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&cert, bad).unwrap();
    let (c, out, _) = run(&["verify", "--in", e, "--cert", cert.to_str().unwrap()], "");
    assert_eq!(c, 2);
    assert!(out.lines().all(|l| l.starts_with("FAIL ")) && !out.is_empty());
}

#[test]
fn parse_errors_exit_one() {
    let (c, _, err) = run(&["decompose", "--d", "3"], "nonsense\n");
    assert_eq!(c, 1);
    assert!(err.contains("parse error"));
    let (c, _, _) = run(&["decompose", "--d", "3", "--in", "/nonexistent/x.emg"], "");
    assert_eq!(c, 1);
    let (c, _, _) = run(&["frobnicate"], "");
    assert_eq!(c, 1);
}

#[test]
fn bad_frame_exits_two() {
    // a path has one face whose boundary revisits the middle vertex
    let path = "emg 3 2\ne 0 0 1 +1\ne 1 1 2 +1\nv 0: 0.0\nv 1: 0.1 1.0\nv 2: 1.1\n";
    let (c, _, err) = run(&["decompose", "--d", "3"], path);
    assert_eq!(c, 2, "{err}");
}

#[test]
fn frontends_chain_into_decompose() {
    let (_, k6, _) = run(&["gen", "--family", "k6"], "");
    let (c, cert, _) = run(&["oneplanar", "--decompose"], &k6);
    assert_eq!(c, 0);
    assert!(cert.starts_with("cert "));
    let (_, map, _) = run(&["gen", "--family", "map", "--params", "30,6", "--seed", "3"], "");
    let (c, frame, _) = run(&["map", "--d", "6"], &map);
    assert_eq!(c, 0);
    assert!(frame.starts_with("emg "));
}

#[test]
fn many_inputs_in_parallel() {
    let mut paths = Vec::new();
    for s in 0..4 {
        let p = tmp(&format!("tri{s}.emg"));
        let (_, t, _) = run(&["gen", "--family", "tri", "--params", "60", "--seed", &s.to_string()], "");
        std::fs::write(&p, t).unwrap();
        paths.push(p.to_str().unwrap().to_string());
    }
    let mut args = vec!["decompose", "--d", "3", "--jobs", "3"];
    for p in &paths {
        args.push("--in");
        args.push(p);
    }
    let (c, out, _) = run(&args, "");
    assert_eq!(c, 0);
    assert_eq!(out.lines().filter(|l| l.contains(" ok ell ")).count(), 4);
    for p in &paths {
        assert!(std::path::Path::new(&format!("{p}.cert")).exists());
    }
}

#[test]
fn svg_is_written() {
    let (_, tri, _) = run(&["gen", "--family", "tri", "--params", "40"], "");
    let svg = tmp("tri.svg");
    let (c, _, _) = run(&["decompose", "--d", "3", "--svg", svg.to_str().unwrap()], &tri);
    assert_eq!(c, 0);
    let s = std::fs::read_to_string(svg).unwrap();
    assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
}
