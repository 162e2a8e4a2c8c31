use std::path::Path;
use std::process::Command;

use pesto::cli::run_with;
use pesto::codec::{decode_public, encode_vector, KIND_SECRET};
use pesto::Field;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pesto").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn keysize_reduced_nist1() {
    let (code, out, _) = run(&["keysize", "--params", "2^6,27,25,10,2", "--reduced"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "sk=7256 pk=476035");
    let (_, out, _) = run(&["keysize", "--params", "2^6,27,25,10,2"]);
    assert_eq!(out.trim(), "sk=7406 pk=786625");
}

#[test]
fn cost_toy_shape() {
    let (code, out, _) = run(&["cost", "--params", "5,5,4,2,1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verify=980 "), "{out}");
}

#[test]
fn toy_subcommand() {
    let (code, out, _) = run(&["toy"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("matching coordinates: 4/4"));
}

#[test]
fn sign_verify_encrypt_decrypt_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, out, _) = run(&["keygen", "--params", "2^6,10,8,3,2", "--seed", "3", "--reduced-a1", "--out-dir", p(d)]);
    assert_eq!(code, 0);
    assert!(out.contains("seed: 3"));
    let f = Field::binary(6).unwrap();

    std::fs::write(d.join("w"), encode_vector(&f, &[1, 2, 3, 4, 5, 6, 7, 8])).unwrap();
    let (sk, pk, w, sig) = (d.join("sk.bin"), d.join("pk.bin"), d.join("w"), d.join("sig"));
    assert_eq!(run(&["sign", "--sk", p(&sk), "--in", p(&w), "--out", p(&sig), "--seed", "1"]).0, 0);
    assert_eq!(run(&["verify", "--pk", p(&pk), "--in", p(&w), "--sig", p(&sig)]).0, 0);

    let mut bytes = std::fs::read(&sig).unwrap();
    bytes[4] ^= 1;
    let bad = d.join("bad");
    std::fs::write(&bad, bytes).unwrap();
    let (code, out, _) = run(&["verify", "--pk", p(&pk), "--in", p(&w), "--sig", p(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "invalid");

    std::fs::write(d.join("msg"), b"an arbitrary message").unwrap();
    let msg = d.join("msg");
    assert_eq!(run(&["sign", "--sk", p(&sk), "--in", p(&msg), "--hash", "--out", p(&sig)]).0, 0);
    assert_eq!(run(&["verify", "--pk", p(&pk), "--in", p(&msg), "--hash", "--sig", p(&sig)]).0, 0);

    let z = d.join("z");
    std::fs::write(&z, encode_vector(&f, &[9, 8, 7, 6, 5, 4, 3, 2, 1, 0])).unwrap();
    let (c, back) = (d.join("c"), d.join("back"));
    assert_eq!(run(&["encrypt", "--pk", p(&pk), "--in", p(&z), "--out", p(&c)]).0, 0);
    assert_eq!(run(&["decrypt", "--sk", p(&sk), "--in", p(&c), "--out", p(&back)]).0, 0);
    let pre = pesto::codec::decode_vectors(&f, &std::fs::read(&back).unwrap()).unwrap();
    assert!(pre.contains(&vec![9, 8, 7, 6, 5, 4, 3, 2, 1, 0]));
}

#[test]
fn keygen_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let code = run(&["keygen", "--params", "2^6,10,8,3,2", "--seed", "11", "--out-dir", p(dir.path())]).0;
        assert_eq!(code, 0);
    }
    for name in ["pk.bin", "sk.bin"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap());
    }
    let pk = decode_public(&std::fs::read(a.path().join("pk.bin")).unwrap()).unwrap();
    assert!(!pk.is_reduced());
}

#[test]
fn attacks_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(&["keygen", "--params", "2^6,10,8,3,2", "--seed", "5", "--reduced-a1", "--out-dir", p(d)]);
    let (pk, sk) = (d.join("pk.bin"), d.join("sk.bin"));
    let json = d.join("r.json");
    let (code, out, _) = run(&["attack", "iso-quad", "--pk", p(&pk), "--json", p(&json)]);
    assert_eq!(code, 0);
    assert!(out.contains("dimension: 3"));
    let parsed: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(parsed["metrics"]["dimension"], 3);
    assert_eq!(run(&["attack", "lin-struct", "--pk", p(&pk)]).0, 0);
    assert_eq!(run(&["attack", "known-a2", "--pk", p(&pk), "--sk", p(&sk)]).0, 0);
    // s >= 1: linearization finds nothing
    assert_eq!(run(&["attack", "linearize", "--pk", p(&pk)]).0, 1);

    let weak = tempfile::tempdir().unwrap();
    let code = run(&["keygen", "--params", "2^6,8,8,1,0", "--allow-s0", "--out-dir", p(weak.path())]).0;
    assert_eq!(code, 0);
    let (code, out, _) = run(&["attack", "linearize", "--pk", p(&weak.path().join("pk.bin"))]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("candidate:"));
}

#[test]
fn solvedeg_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let (code, out, _) = run(&["solvedeg", "--params", "2^6,7,5,2,2", "--trials", "1", "--out", p(&csv)]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], pesto::solvedeg::CSV_HEADER);
    assert!(lines[1].starts_with("64,7,5,2,2,1,"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), out);
}

#[test]
fn error_paths_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["bogus".into()], 2),
        (vec!["keysize".into()], 2),
        (vec!["keysize".into(), "--params".into(), "6,5,4,2,1".into()], 2),
        (vec!["keygen".into(), "--params".into(), "2^6,8,8,1,0".into(), "--out-dir".into(), p(d).into()], 2),
        (vec!["verify".into(), "--pk".into(), "/nonexistent".into(), "--in".into(), "x".into(), "--sig".into(), "y".into()], 2),
    ];
    for (args, expected) in cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = run(&argv);
        assert_eq!(code, expected, "{args:?}: {err}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }

    run(&["keygen", "--params", "2^6,6,4,2,2", "--out-dir", p(d)]);
    let mut bytes = std::fs::read(d.join("pk.bin")).unwrap();
    bytes[5] = KIND_SECRET;
    std::fs::write(d.join("flipped"), &bytes).unwrap();
    std::fs::write(d.join("w"), encode_vector(&Field::binary(6).unwrap(), &[0; 4])).unwrap();
    let (code, _, err) = run(&["verify", "--pk", p(&d.join("flipped")), "--in", p(&d.join("w")), "--sig", p(&d.join("w"))]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pesto");
    let out = Command::new(bin).args(["keysize", "--params", "2^6,27,25,10,2", "--reduced"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "sk=7256 pk=476035");
    let out = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
