//! End-to-end acceptance criteria. Each criterion prints one line and the
//! test fails if any of them fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use paperlab_core::branched::{run_branched_pipeline, BranchedOptions};
use paperlab_core::conj::{conjugacy_count, coset_parametrization_check, cyclic_family, frobenius20, random_instances};
use paperlab_core::curvature::{pentagon_side, regular_polygon_angle};
use paperlab_core::feighn_mess::{ball_fixed_points, classify_horizontal_links, fixed_census};
use paperlab_core::report::{run_all, RunConfig};
use paperlab_core::rips::{
    certify_curvature, check_no_repetition, first_repeated_pair, morse_census, partition_wise,
    presentation_g, quotient_checks, triangle_complex, verify_handle_cancellation, wise_word, word_string,
    BLOCK,
};

const ANGLE_TOL: f64 = 1e-9;
const SIDE_TOL: f64 = 1e-12;

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(n: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let el = t.elapsed();
    let ok = o.ok && el <= limit;
    println!(
        "criterion {n:>2}: {}  {} ({:.2?} of {:.0?})",
        if ok { "PASS" } else { "FAIL" },
        o.detail,
        el,
        limit
    );
    ok
}

fn c1() -> Outcome {
    let mut ok = true;
    for m in 3..=60 {
        let w = wise_word(m).unwrap();
        ok &= w.len() == (m - 1) * (m - 1) && check_no_repetition(&w).0;
    }
    ok &= word_string(&wise_word(3).unwrap()) == "a2a2a3a3";
    ok &= word_string(&wise_word(4).unwrap()) == "a2a2a3a2a4a3a3a4a4";
    Outcome {
        ok,
        detail: "Wise words for 3 <= m <= 60 have length (m-1)^2 and no repeated pair".into(),
    }
}

fn c2() -> Outcome {
    let d = partition_wise(30).unwrap();
    let words = d.all_words();
    let a1 = |ws: &[Vec<u32>]| ws.iter().flatten().filter(|&&x| x == 1).count();
    let ok = words.len() == 60
        && words.iter().all(|w| w.len() == BLOCK)
        && a1(&d.w) == 1
        && a1(&d.v) == 1
        && first_repeated_pair(&words).is_none()
        && d.unused.len() == 3;
    Outcome {
        ok,
        detail: format!("{} blocks of length {BLOCK}, {} unused letters", words.len(), d.unused.len()),
    }
}

fn c3() -> Outcome {
    let r = certify_curvature(30, 5).unwrap();
    let s = pentagon_side();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    // k = 5 is the regular right-angled pentagon itself, so equality up to rounding
    let min_angle = (5..=50)
        .map(|k| regular_polygon_angle(k, s).unwrap())
        .fold(f64::INFINITY, f64::min);
    let ok = r.girth >= 2.0 * PI - ANGLE_TOL
        && r.structural_ok
        && (s.cosh() - golden).abs() <= SIDE_TOL
        && min_angle >= PI / 2.0 - ANGLE_TOL;
    Outcome {
        ok,
        detail: format!(
            "girth {:.6} at {} vertices, cosh(s) - phi = {:.1e}, min k-gon angle - pi/2 = {:.1e}",
            r.girth,
            r.vertices_checked,
            s.cosh() - golden,
            min_angle - PI / 2.0
        ),
    }
}

fn c4() -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for m in [30, 31, 40] {
        let tc = triangle_complex(&partition_wise(m).unwrap(), Some(5)).unwrap();
        let c = morse_census(&tc).unwrap();
        let a = &c.ascending;
        ok &= a.components == 13 * m + 1
            && a.singletons == 13 * m
            && c.singletons_are_s
            && a.big_components.len() == 1
            && a.big_components[0].1
            && c.tree_has_cone_points
            && c.isomorphic_under_swap;
        seen.push(a.components);
    }
    Outcome {
        ok,
        detail: format!("ascending link components {seen:?}"),
    }
}

fn c5() -> Outcome {
    let r = verify_handle_cancellation(30, false).unwrap();
    let neg = verify_handle_cancellation(30, true).unwrap();
    Outcome {
        ok: r.passes() && !neg.b_failures.is_empty(),
        detail: format!(
            "(a) {}/30, (b) {}/30, (c) {}/30; control breaks (b) at {} labels",
            r.a_passed,
            r.b_passed,
            r.c_passed,
            neg.b_failures.len()
        ),
    }
}

fn c6() -> Outcome {
    let q = quotient_checks(&presentation_g(30, 5).unwrap(), Some(5));
    Outcome {
        ok: q.z_map_ok && q.a1_map_ok && q.a1_order == Some(5),
        detail: format!("order of a1 is {:?}", q.a1_order),
    }
}

fn c7() -> Outcome {
    let opts = BranchedOptions {
        flag_links: true,
        ..BranchedOptions::default()
    };
    let r = run_branched_pipeline(&opts).unwrap();
    let c = r.commutators.as_ref().unwrap();
    let l = r.lift.as_ref().unwrap();
    let y = r.y.as_ref().unwrap();
    let ok = r.passes()
        && c.power_pairs_five_cycles == 9
        && c.loop_pairs_five_cycles == 36
        && r.sigma2.as_ref().unwrap().checked == 107
        && l.orbit_size == 125
        && l.union_find_components == 1
        && l.square_fiber_fixed_points == 125
        && l.free_on_link
        && y.census.chi_census == y.census.chi_direct
        && y.flag_links_ok == Some(true);
    Outcome {
        ok,
        detail: format!(
            "{} stages, orbit {}, chi(Y) = {}, {} flag links",
            r.stages.len(),
            l.orbit_size,
            y.census.chi_direct,
            y.flag_links_checked.unwrap_or(0)
        ),
    }
}

fn c8() -> Outcome {
    let mut ok = true;
    for n in 1..=6 {
        let c = fixed_census(n).unwrap();
        ok &= c.passes() && c.components.len() == 1 << n && c.types == n + 1;
    }
    for n in 1..=3 {
        ok &= classify_horizontal_links(n).unwrap().passes();
    }
    ok &= ball_fixed_points(1, 3).unwrap().unique_fixed_point();
    ok &= ball_fixed_points(2, 2).unwrap().unique_fixed_point();
    Outcome {
        ok,
        detail: "fixed census for n <= 6, links for n <= 3, unique fixed vertex in both balls".into(),
    }
}

fn c9() -> Outcome {
    let f = conjugacy_count(&frobenius20()).unwrap();
    let mut ok = f.classes_meeting == 4 && f.index_bound == 4;
    ok &= coset_parametrization_check(&frobenius20()).unwrap().holds();
    let insts = random_instances(100, 200, 0);
    for i in &insts {
        ok &= conjugacy_count(i).unwrap().pass && coset_parametrization_check(i).unwrap().holds();
    }
    let fam = cyclic_family(2..=12).unwrap();
    ok &= fam.iter().all(|r| r.index_bound == r.n && r.phi_cent_trivial);
    Outcome {
        ok,
        detail: format!("Frobenius {} vs {}, {} random instances, family n = 2..12", f.classes_meeting, f.index_bound, insts.len()),
    }
}

fn c10() -> Outcome {
    let cfg = RunConfig::default();
    let a = run_all(&cfg).unwrap().to_json();
    let b = run_all(&cfg).unwrap().to_json();
    Outcome {
        ok: a == b,
        detail: format!("two default reports of {} bytes are identical", a.len()),
    }
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, s(1), c1),
        criterion(2, s(1), c2),
        criterion(3, s(30), c3),
        criterion(4, s(30), c4),
        criterion(5, s(60), c5),
        criterion(6, s(60), c6),
        criterion(7, s(300), c7),
        criterion(8, s(60), c8),
        criterion(9, s(60), c9),
        criterion(10, s(300), c10),
    ];
    let failed: Vec<usize> = (1..=10).filter(|&i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
