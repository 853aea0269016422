//! Replays the checked-in fuzz corpus through the parsers with the same
//! round-trip assertions the fuzz targets use.

use std::fs;
use std::path::PathBuf;

use paperlab_core::conj::parse_instance;
use paperlab_core::perm::Perm;
use paperlab_core::text::{parse_complex, parse_voltages, write_complex, write_voltages, NamedPresentation};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn split_degree(data: &[u8], modulus: u8) -> (usize, &str) {
    let (&d, rest) = data.split_first().unwrap();
    (usize::from(d % modulus) + 1, std::str::from_utf8(rest).unwrap())
}

fn check(target: &str, rejected: &[&str], accept: impl Fn(&[u8]) -> bool) {
    for (name, data) in seeds(target) {
        let ok = accept(&data);
        assert_eq!(ok, !rejected.contains(&name.as_str()), "{target}/{name}");
    }
}

#[test]
fn complex_seeds() {
    check("parse_complex", &["bad_endpoint"], |d| {
        let Ok(c) = parse_complex(std::str::from_utf8(d).unwrap()) else {
            return false;
        };
        assert_eq!(parse_complex(&write_complex(&c)).unwrap().counts(), c.counts());
        true
    });
}

#[test]
fn voltage_seeds() {
    check("parse_voltages", &["repeated"], |d| {
        let (deg, text) = split_degree(d, 16);
        let Ok(v) = parse_voltages(text, deg) else {
            return false;
        };
        assert_eq!(parse_voltages(&write_voltages(&v), deg).unwrap(), v);
        true
    });
}

#[test]
fn presentation_seeds() {
    check("parse_presentation", &["unknown"], |d| {
        let Ok(p) = NamedPresentation::parse(std::str::from_utf8(d).unwrap()) else {
            return false;
        };
        assert_eq!(NamedPresentation::parse(&p.to_text()).unwrap(), p);
        true
    });
}

#[test]
fn perm_seeds() {
    check("parse_perm", &["unclosed"], |d| {
        let (deg, text) = split_degree(d, 32);
        let Ok(p) = Perm::parse(deg, text) else {
            return false;
        };
        assert_eq!(Perm::parse(deg, &p.to_cycle_string()).unwrap(), p);
        assert!(p.then(&p.inverse()).is_identity());
        true
    });
}

#[test]
fn conj_instance_seeds() {
    check("parse_conj_instance", &["degree_too_big"], |d| {
        let Ok(inst) = parse_instance(std::str::from_utf8(d).unwrap()) else {
            return false;
        };
        let back = parse_instance(&inst.to_text()).unwrap();
        assert_eq!(back.g_gens, inst.g_gens);
        assert_eq!(back.sigma, inst.sigma);
        true
    });
}
