use std::path::PathBuf;
use std::process::{Command, Output};

fn hyptype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyptype"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value after `key ` on its own line.
fn field(o: &Output, key: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in {}", stdout(o)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyptype-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dist_examples() {
    let o = hyptype(&["dist", "--domain", "ball2", "--metric", "rho", "0,0", "0.9,0"]);
    assert!(o.status.success());
    let expected = 2.0 * (0.9 / 0.19f64.sqrt()).asinh();
    assert_eq!(stdout(&o).trim(), format!("{expected:.12}"));

    let o = hyptype(&["dist", "--domain", "punctured2", "--metric", "k", "1,0", "0,1"]);
    assert_eq!(stdout(&o).trim(), "1.570796326795");

    let o = hyptype(&["dist", "--domain", "ball2", "--metric", "j", "0,0", "0.5,0"]);
    assert_eq!(stdout(&o).trim(), format!("{:.12}", 2f64.ln()));

    let o = hyptype(&["dist", "--domain", "ball2", "--metric", "k", "-0.3,0.2", "0.4,-0.1", "--resolution", "64", "--segments", "32"]);
    let s = stdout(&o);
    assert!(o.status.success() && s.starts_with('[') && s.trim().ends_with(']'), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(hyptype(&["dist", "--domain", "bogus", "--metric", "k", "1,0", "0,1"]).status.code(), Some(2));
    assert_eq!(hyptype(&["dist", "--domain", "ball2", "--metric", "k", "1,x", "0,1"]).status.code(), Some(2));
    assert_eq!(hyptype(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(hyptype(&["dist", "--domain", "ball2", "--metric", "k", "1,0", "0,0.5"]).status.code(), Some(1));
    assert_eq!(hyptype(&["dist", "--domain", "ball2"]).status.code(), Some(2));
}

#[test]
fn ball_examples() {
    let o = hyptype(&["ball", "--domain", "punctured2", "--metric", "j", "--center", "1,0", "--M", "0.6931", "--convexity"]);
    assert_eq!(field(&o, "convex"), "true");

    let o = hyptype(&["ball", "--domain", "punctured2", "--metric", "k", "--center", "1,0", "--M", "1.3", "--convexity"]);
    assert_eq!(field(&o, "convexity"), "NonConvex");

    let csv = scratch("rho.csv");
    let svg = scratch("rho.svg");
    let o = hyptype(&[
        "ball", "--domain", "ball2", "--metric", "rho", "--M", "1", "--trace",
        "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let r = 0.5f64.tanh();
    for key in ["radius_min", "radius_max"] {
        assert!((field(&o, key).parse::<f64>().unwrap() - r).abs() < 1e-9);
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,y"));
    assert_eq!(text.lines().count(), 257);
    let again = hyptype(&["ball", "--domain", "ball2", "--metric", "rho", "--M", "1", "--trace", "--out", csv.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<path").count(), 1);
}

#[test]
fn verify_reports_are_reproducible() {
    let a = scratch("a.toml");
    let b = scratch("b.toml");
    for p in [&a, &b] {
        let o = hyptype(&["verify", "inequalities", "--domain", "punctured2", "--budget", "200", "--seed", "9", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let parsed: toml::Value = toml::from_str(&text).unwrap();
    let checks = parsed["check"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"].as_str() == Some("delta_search_matches_closed_form")));
    assert!(checks.iter().all(|c| c["seed"].as_integer() == Some(9)));
}

#[test]
fn verify_trig_and_transforms() {
    let o = hyptype(&["verify", "trig", "--budget", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: toml::Value = toml::from_str(&stdout(&o)).unwrap();
    for c in parsed["check"].as_array().unwrap() {
        assert!(c["worst_margin"].as_float().unwrap() >= -1e-9);
    }
    assert_eq!(hyptype(&["verify", "transforms", "--budget", "2000"]).status.code(), Some(0));
    assert_eq!(hyptype(&["verify", "balls", "--domain", "half2"]).status.code(), Some(0));
}

#[test]
fn uniformity_of_punctured_plane() {
    let o = hyptype(&["verify", "uniformity", "--domain", "punctured2", "--budget", "1024"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: toml::Value = toml::from_str(&stdout(&o)).unwrap();
    let est = parsed["check"][0]["values"]["estimate"].as_float().unwrap();
    let target = std::f64::consts::PI / 3f64.ln();
    assert!((est - target).abs() <= 0.05 * target, "{est}");

    let o = hyptype(&["uniformity", "--domain", "half2", "--budget", "512"]);
    assert!((field(&o, "estimate").parse::<f64>().unwrap() - 2.0).abs() < 0.1);
}

#[test]
fn trig_and_geodesic_commands() {
    let o = hyptype(&["trig", "cosines", "1,0.1", "-1,0.3", "0.2,-2"]);
    assert_eq!(field(&o, "kind"), "Trigon");
    assert!(field(&o, "residual").parse::<f64>().unwrap() <= 1e-9);
    let o = hyptype(&["trig", "halfplane", "0,2", "0,0.5", "0,1"]);
    assert!(field(&o, "margin").parse::<f64>().unwrap().abs() < 1e-9);

    let csv = scratch("spiral.csv");
    let o = hyptype(&["geodesic", "--domain", "punctured2", "1,0", "0,1", "--out", csv.to_str().unwrap()]);
    assert_eq!(field(&o, "distance"), "1.570796326795");
    // chords of the spiral are slightly longer than the spiral
    let len: f64 = field(&o, "length").parse().unwrap();
    assert!(len >= std::f64::consts::FRAC_PI_2 && len - std::f64::consts::FRAC_PI_2 < 1e-4);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 130);
}

#[test]
fn levelset_command() {
    let svg = scratch("levels.svg");
    let o = hyptype(&["levelset", "--c", "2.0,2.9", "--resolution", "400", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("c 2.9 empty"), "{s}");
    assert!(s.lines().next().unwrap().starts_with("c 2 contours"), "{s}");
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<path"));
}
