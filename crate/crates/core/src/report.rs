//! Check results, run configuration and the suites behind the command line.
//!
//! Every claim a pipeline verifies becomes one [`CheckResult`] with a stable
//! id. Reports are sorted by id; runtimes are only recorded on request so
//! that default reports are byte-stable.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::branched::{run_branched_pipeline, BranchedOptions};
use crate::conj::{coset_check_enumerated, count_enumerated, run_conj, ConjInstance};
use crate::curvature::{pentagon_side, regular_polygon_angle};
use crate::feighn_mess::{self, MAX_BALL_N, MAX_CENSUS_N, MAX_LINK_N, MAX_RADIUS};
use crate::rips::{self, MIN_M};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub payload: Value,
    /// The claim being checked, in words.
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub radius: usize,
    pub tol: f64,
    pub random_loops: usize,
    pub random_instances: usize,
    pub seed: u64,
    /// Parallelism does not change results, so it is left out of reports.
    #[serde(skip)]
    pub threads: usize,
    pub flag_links: bool,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 30,
            k: 5,
            n: 3,
            radius: 3,
            tol: 1e-9,
            random_loops: 100,
            random_instances: 100,
            seed: 0,
            threads: 1,
            flag_links: false,
            timings: false,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("m = {0} is below the minimum {MIN_M}")]
    M(usize),
    #[error("k = {0} must be at least 2")]
    K(usize),
    #[error("n = {0} must lie in 1..={MAX_CENSUS_N}")]
    N(usize),
    #[error("radius = {0} must be at most {MAX_RADIUS}")]
    Radius(usize),
    #[error("tolerance {0} must be positive and below 1")]
    Tol(f64),
    #[error("threads must be at least 1")]
    Threads,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m < MIN_M {
            return Err(ConfigError::M(self.m));
        }
        if self.k < 2 {
            return Err(ConfigError::K(self.k));
        }
        if !(1..=MAX_CENSUS_N).contains(&self.n) {
            return Err(ConfigError::N(self.n));
        }
        if self.radius > MAX_RADIUS {
            return Err(ConfigError::Radius(self.radius));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(ConfigError::Tol(self.tol));
        }
        if self.threads == 0 {
            return Err(ConfigError::Threads);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunInfo {
    pub config: RunConfig,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub run: RunInfo,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(config: &RunConfig, mut checks: Vec<CheckResult>) -> Report {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report {
            run: RunInfo {
                config: config.clone(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            checks,
        }
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// 0 when every check that ran passed, 3 on an internal error, else 1.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Error) {
            3
        } else if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_table(&self) -> String {
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut s = String::new();
        for c in &self.checks {
            let _ = write!(s, "{:<w$}  {:<7}  {}", c.id, c.status.as_str(), c.anchor);
            if let Some(ms) = c.runtime_ms {
                let _ = write!(s, "  ({ms} ms)");
            }
            s.push('\n');
        }
        let pass = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let _ = writeln!(s, "{pass}/{} checks passed", self.checks.len());
        s
    }
}

/// Collects checks for one suite, stamping each with the time since the
/// previous stamp when timings are on.
struct Sink {
    out: Vec<CheckResult>,
    timings: bool,
    clock: Instant,
}

impl Sink {
    fn new(timings: bool) -> Sink {
        Sink {
            out: Vec::new(),
            timings,
            clock: Instant::now(),
        }
    }

    fn push(&mut self, id: &str, status: Status, anchor: &str, payload: Value) {
        let ms = self.timings.then(|| self.clock.elapsed().as_millis() as u64);
        self.clock = Instant::now();
        self.out.push(CheckResult {
            id: id.to_string(),
            status,
            payload,
            anchor: anchor.to_string(),
            runtime_ms: ms,
        });
    }

    fn check(&mut self, id: &str, ok: bool, anchor: &str, payload: Value) {
        self.push(id, Status::from_bool(ok), anchor, payload);
    }

    fn error(&mut self, id: &str, e: impl std::fmt::Display) {
        self.push(id, Status::Error, "pipeline raised an error", json!({ "error": e.to_string() }));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Rips,
    Branched,
    FeighnMess,
    Conj,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Rips, Suite::Branched, Suite::FeighnMess, Suite::Conj];
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<CheckResult> {
    match suite {
        Suite::Rips => rips_checks(cfg),
        Suite::Branched => branched_checks(cfg),
        Suite::FeighnMess => feighn_mess_checks(cfg),
        Suite::Conj => conj_checks(cfg, None),
    }
}

/// Runs the given suites, in parallel when `cfg.threads > 1`.
pub fn run(suites: &[Suite], cfg: &RunConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    let checks = if cfg.threads > 1 && suites.len() > 1 {
        std::thread::scope(|s| {
            let handles: Vec<_> = suites.iter().map(|&x| s.spawn(move || run_suite(x, cfg))).collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite thread"))
                .collect()
        })
    } else {
        suites.iter().flat_map(|&x| run_suite(x, cfg)).collect()
    };
    Ok(Report::new(cfg, checks))
}

pub fn run_all(cfg: &RunConfig) -> Result<Report, ConfigError> {
    run(&Suite::ALL, cfg)
}

pub fn rips_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let mut s = Sink::new(cfg.timings);
    if let Err(e) = rips_into(&mut s, cfg) {
        s.error("rips.error", e);
    }
    s.out
}

fn rips_into(s: &mut Sink, cfg: &RunConfig) -> Result<(), rips::RipsError> {
    let (m, k, tol) = (cfg.m, cfg.k, cfg.tol);
    let data = rips::partition_wise(m)?;
    let word = &data.sigma_word;
    s.check(
        "rips.wise_word.length",
        word.len() == (m - 1) * (m - 1),
        "the word has length (m-1)^2",
        json!({ "length": word.len(), "expected": (m - 1) * (m - 1) }),
    );
    let (ok, pair) = rips::check_no_repetition(word);
    s.check(
        "rips.wise_word.no_repeat",
        ok,
        "no two-letter subword occurs twice",
        json!({ "repeated": pair }),
    );
    let lengths_ok = data.all_words().iter().all(|w| w.len() == rips::BLOCK);
    s.check(
        "rips.partition.blocks",
        data.w.len() + data.v.len() == 2 * m && lengths_ok,
        "2m words W_j, V_j of length 14",
        json!({ "blocks": data.w.len() + data.v.len(), "word_length": rips::BLOCK }),
    );
    let count_a1 = |ws: &[Vec<u32>]| ws.iter().flatten().filter(|&&x| x == 1).count();
    s.check(
        "rips.partition.a1_once",
        count_a1(&data.w) == 1 && count_a1(&data.v) == 1,
        "a1 occurs once among the W_j and once among the V_j",
        json!({ "in_w": count_a1(&data.w), "in_v": count_a1(&data.v) }),
    );
    let rep = rips::first_repeated_pair(&data.all_words());
    s.check(
        "rips.partition.no_repeat",
        rep.is_none(),
        "two-letter subwords of all W_j, V_j are distinct",
        json!({ "repeated": rep }),
    );
    let used: usize = data.blocks.iter().sum();
    s.check(
        "rips.partition.unused",
        data.unused.len() + used == word.len() && data.unused.len() == m * m - 30 * m + 3,
        "the partition leaves a short unused tail",
        json!({ "unused": data.unused.len() }),
    );

    let p = rips::presentation_g(m, k)?;
    let q = rips::quotient_checks(&p, Some(k));
    s.check(
        "rips.quotient.z_map",
        q.z_map_ok,
        "t -> 1, a_j -> 0 kills every relator",
        json!({ "first_offending_relator": q.first_offending_relator }),
    );
    s.check(
        "rips.quotient.a1_map",
        q.a1_map_ok,
        "a1 -> 1 mod k kills every relator",
        json!({ "k": k }),
    );
    s.check(
        "rips.quotient.a1_order",
        q.a1_order == Some(k),
        "a1 has order exactly k",
        json!({ "order": q.a1_order }),
    );

    let cr = rips::certify_curvature(m, k)?;
    s.check(
        "rips.curvature.girth",
        cr.girth >= 2.0 * PI - tol,
        "every vertex link has girth at least 2 pi",
        json!({ "girth": cr.girth, "vertices": cr.vertices_checked, "link_vertices": cr.link_vertices, "link_edges": cr.link_edges }),
    );
    s.check(
        "rips.curvature.structural",
        cr.structural_ok && cr.bipartite && cr.no_bigons && cr.min_a_edge >= PI / 2.0 - tol,
        "links are bipartite, bigon-free, with edges of at least pi/2",
        json!({ "bipartite": cr.bipartite, "no_bigons": cr.no_bigons, "min_edge": cr.min_a_edge }),
    );
    let side = pentagon_side();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    s.check(
        "rips.curvature.pentagon_side",
        (side.cosh() - golden).abs() <= 1e-12,
        "the right-angled pentagon side satisfies cosh s = golden ratio",
        json!({ "side": side, "cosh": side.cosh() }),
    );
    let worst = (5..=50)
        .map(|j| regular_polygon_angle(j, side))
        .collect::<Result<Vec<f64>, _>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    s.check(
        "rips.curvature.polygon_angles",
        worst >= PI / 2.0 - tol,
        "regular k-gons with that side have angle at least pi/2 for 5 <= k <= 50",
        json!({ "min_angle": worst, "kgon_angle": cr.kgon_angle }),
    );

    let tc = rips::triangle_complex(&data, Some(k))?;
    let mc = rips::morse_census(&tc)?;
    let a = &mc.ascending;
    s.check(
        "rips.asc_link.components",
        a.components == 13 * m + 1,
        "the ascending vertex link has 13m + 1 components",
        json!({ "components": a.components, "expected": 13 * m + 1 }),
    );
    s.check(
        "rips.asc_link.singletons",
        a.singletons == 13 * m && mc.singletons_are_s,
        "13m components are single points s_ij",
        json!({ "singletons": a.singletons }),
    );
    let one_tree = a.big_components.len() == 1 && a.big_components[0].1;
    s.check(
        "rips.asc_link.tree",
        one_tree && mc.tree_has_cone_points,
        "the remaining component is a tree through t and every a_i",
        json!({ "tree_vertices": a.big_components.first().map(|c| c.0), "arm_segments": mc.arm_segments.first() }),
    );
    s.check(
        "rips.desc_link.swap_isomorphic",
        mc.isomorphic_under_swap,
        "the descending link matches the ascending one under W <-> V",
        json!({ "components": mc.descending.components }),
    );
    let dr = rips::check_disks(&data)?;
    s.check(
        "rips.disks",
        dr.all_euler_one && dr.all_boundaries_match && dr.interior_edges_shared_twice,
        "each subdivided relator cell is a disk reading its relator",
        json!({ "disks": dr.disks }),
    );
    let hr = rips::verify_handle_cancellation(m, false)?;
    s.check(
        "rips.handles.a",
        hr.a_failures.is_empty() && hr.shaded_region_ok,
        "each W disk collapses onto its boundary path",
        json!({ "passed": hr.a_passed, "failures": hr.a_failures }),
    );
    s.check(
        "rips.handles.b",
        hr.b_failures.is_empty() && hr.boundaries_in_x1_u,
        "each a_j has exactly one rising face left",
        json!({ "passed": hr.b_passed, "failures": hr.b_failures }),
    );
    s.check(
        "rips.handles.c",
        hr.c_failures.is_empty(),
        "each V disk collapses onto V_i",
        json!({ "passed": hr.c_passed, "failures": hr.c_failures, "collapse_steps": hr.collapse_steps }),
    );
    let neg = rips::verify_handle_cancellation(m, true)?;
    s.check(
        "rips.handles.negative_control",
        !neg.b_failures.is_empty(),
        "placing Delta_i1 in U breaks the rising-face count",
        json!({ "b_failures": neg.b_failures.len() }),
    );
    Ok(())
}

pub fn branched_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let mut s = Sink::new(cfg.timings);
    let opts = BranchedOptions {
        random_loops: cfg.random_loops,
        seed: cfg.seed,
        flag_links: cfg.flag_links,
        ..BranchedOptions::default()
    };
    let r = match run_branched_pipeline(&opts) {
        Ok(r) => r,
        Err(e) => {
            s.error("branched.error", e);
            return s.out;
        }
    };
    let anchor = |name: &str| -> &'static str {
        match name {
            "locus" => "L is three disjoint copies of Theta, full and sigma-invariant",
            "commutators" => "all 9 power and 36 loop-pair commutators are 5-cycles",
            "k2-completion" => "voltages complete consistently on K2, free of rank 6",
            "sigma2-identity" => "rho(sigma2 g) = alpha^2 rho(g) alpha^-2",
            "projection-identity" => "pr_i sigma3 = sigma2 pr_i",
            "tau-flat" => "tau is flat on every square of K3",
            "hi-invariance" => "sigma3 preserves each H_i",
            "cover-connected" => "the 125-sheeted cover is connected",
            "lift" => "the lift of sigma3 is an involution fixing a vertex",
            "free-on-link" => "the lift acts freely on the fixed vertex's link",
            "branched-census" => "chi(Y) agrees by orbit census and by cell count",
            "flag-links" => "every vertex link of Y is flag",
            _ => "stage of the branched pipeline",
        }
    };
    for st in &r.stages {
        let mut payload = json!({ "detail": st.detail });
        match st.name.as_str() {
            "k2-completion" => {
                if let Some(k) = &r.k2 {
                    payload = json!({ "rank": k.rank, "betti": k.betti, "vertices": k.vertices, "edges": k.edges, "faces": k.faces, "orbit_of_one": k.orbit_of_one });
                }
            }
            "commutators" => {
                if let Some(c) = &r.commutators {
                    payload = serde_json::to_value(c).unwrap_or(payload);
                }
            }
            "cover-connected" => {
                if let Some(l) = &r.lift {
                    payload = json!({ "orbit_size": l.orbit_size, "components": l.union_find_components, "cover_vertices": l.cover_vertices });
                }
            }
            "lift" => {
                if let Some(l) = &r.lift {
                    payload = json!({ "square_fixed_sheets": l.square_fiber_fixed_points, "basepoint_fixed": l.basepoint_fixed });
                }
            }
            "branched-census" => {
                if let Some(y) = &r.y {
                    payload = json!({ "chi_census": y.census.chi_census, "chi_direct": y.census.chi_direct, "vertices": y.vertices, "edges": y.edges, "faces": y.faces, "cubes": y.cubes, "height_squares": y.height_squares_checked });
                }
            }
            _ => {}
        }
        let id = format!("branched.{}", st.name.replace('-', "_"));
        s.check(&id, st.passed, anchor(&st.name), payload);
    }
    if !cfg.flag_links {
        s.push("branched.flag_links", Status::Skipped, anchor("flag-links"), json!({ "enable": "--flag-links" }));
    }
    s.out
}

pub fn feighn_mess_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let mut s = Sink::new(cfg.timings);
    if let Err(e) = feighn_mess_into(&mut s, cfg) {
        s.error("feighn_mess.error", e);
    }
    s.out
}

fn feighn_mess_into(s: &mut Sink, cfg: &RunConfig) -> Result<(), feighn_mess::FeighnMessError> {
    let max_n = cfg.n.max(1);
    let (mut inv, mut eq) = (true, true);
    for n in 1..=max_n {
        let d = feighn_mess::power_data(n)?;
        inv &= d.sigma.compose(&d.sigma).is_identity();
        eq &= feighn_mess::height_is_equivariant(&d) && d.height.validate_affine_cubical(&d.power.complex).is_ok();
        let c = feighn_mess::fixed_census(n)?;
        s.check(
            &format!("feighn_mess.fixed_census.n{n}"),
            c.passes(),
            "Fix(sigma_n) has 2^n components of n + 1 types",
            json!({ "components": c.components.len(), "types": c.types }),
        );
        if n <= MAX_LINK_N {
            let l = feighn_mess::classify_horizontal_links(n)?;
            s.check(
                &format!("feighn_mess.links.n{n}"),
                l.passes(),
                "ascending links of horizontal cells are simplices, empty on b x ... x b",
                json!({
                    "cells": l.cells.len(),
                    "engine_checks": l.engine_checks,
                    "vertex_link_dim": l.vertex_link_dim,
                    "note": l.dimension_note,
                }),
            );
        }
    }
    s.check(
        "feighn_mess.involution",
        inv,
        "sigma_n squares to the identity",
        json!({ "max_n": max_n }),
    );
    s.check(
        "feighn_mess.height_equivariant",
        eq,
        "the height is well formed and sigma_n-invariant",
        json!({ "max_n": max_n }),
    );
    let mut balls = vec![(1, 3), (2, 2)];
    let custom = (cfg.n.min(MAX_BALL_N), cfg.radius);
    if !balls.contains(&custom) {
        balls.push(custom);
    }
    for (n, r) in balls {
        let b = feighn_mess::ball_fixed_points(n, r)?;
        s.check(
            &format!("feighn_mess.ball.n{n}_r{r}"),
            b.unique_fixed_point(),
            "the lift fixes exactly one vertex of the ball, at height 0",
            json!({ "ball_vertices": b.ball_vertices, "fixed_vertices": b.fixed_vertices, "fixed_heights": b.fixed_heights }),
        );
    }
    Ok(())
}

/// With an instance, only that instance is counted; otherwise the preset
/// suite (Frobenius group, random instances, cyclic family).
pub fn conj_checks(cfg: &RunConfig, instance: Option<&ConjInstance>) -> Vec<CheckResult> {
    let mut s = Sink::new(cfg.timings);
    if let Some(inst) = instance {
        match inst.enumerate() {
            Ok(e) => {
                let c = count_enumerated(&e);
                s.check(
                    "conj.instance.count",
                    c.pass,
                    "classes meeting P are at least the centralizer index",
                    serde_json::to_value(&c).unwrap_or(Value::Null),
                );
                let k = coset_check_enumerated(&e);
                s.check(
                    "conj.instance.cosets",
                    k.holds(),
                    "P-conjugacy matches cosets of phi(Cent_G sigma)",
                    serde_json::to_value(&k).unwrap_or(Value::Null),
                );
            }
            Err(e) => s.error("conj.instance.error", e),
        }
        return s.out;
    }
    let r = match run_conj(cfg.random_instances, cfg.seed) {
        Ok(r) => r,
        Err(e) => {
            s.error("conj.error", e);
            return s.out;
        }
    };
    let f = &r.frobenius;
    s.check(
        "conj.frobenius20.count",
        f.pass && f.index_bound == 4 && f.classes_meeting == 4,
        "Frobenius group of order 20: 4 classes against index 4",
        json!({ "classes_meeting": f.classes_meeting, "index_bound": f.index_bound }),
    );
    s.check(
        "conj.frobenius20.cosets",
        r.frobenius_cosets.holds(),
        "the coset parametrization holds on all pairs",
        json!({ "pairs": r.frobenius_cosets.pairs }),
    );
    s.check(
        "conj.random",
        r.random_failures.is_empty(),
        "random finite instances satisfy the bound and the coset equivalence",
        json!({ "instances": r.random_instances, "failures": r.random_failures }),
    );
    let fam: Vec<Value> = r
        .family
        .iter()
        .map(|x| json!({ "n": x.n, "p": x.p, "index_bound": x.index_bound }))
        .collect();
    s.check(
        "conj.cyclic_family",
        r.family.iter().all(|x| x.index_bound == x.n && x.phi_cent_trivial),
        "Z_p by Z_n onto Z_n has index n with trivial phi(Cent)",
        Value::Array(fam),
    );
    s.out
}

/// Presentation of `G` (with `a1^k`) or `G₀` in the neutral text format.
pub fn export_presentation(m: usize, k: Option<usize>) -> Result<String, rips::RipsError> {
    Ok(match k {
        Some(k) => rips::presentation_g(m, k)?,
        None => rips::presentation_g0(m)?,
    }
    .to_text())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { m: 10, ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::M(10)));
        assert!(run(&[Suite::Rips], &bad).is_err());
        assert!(RunConfig { n: 7, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { radius: 9, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { tol: 0.0, ..RunConfig::default() }.validate().is_err());
    }

    #[test]
    fn exit_codes() {
        let cfg = RunConfig::default();
        let mk = |st| CheckResult {
            id: "x".into(),
            status: st,
            payload: Value::Null,
            anchor: String::new(),
            runtime_ms: None,
        };
        assert_eq!(Report::new(&cfg, vec![mk(Status::Pass), mk(Status::Skipped)]).exit_code(), 0);
        assert_eq!(Report::new(&cfg, vec![mk(Status::Pass), mk(Status::Fail)]).exit_code(), 1);
        assert_eq!(Report::new(&cfg, vec![mk(Status::Fail), mk(Status::Error)]).exit_code(), 3);
    }

    #[test]
    fn feighn_mess_and_conj_suites_pass() {
        let cfg = RunConfig::default();
        let r = run(&[Suite::FeighnMess, Suite::Conj], &cfg).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.to_table());
        let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert!(!r.to_json().contains("runtime_ms"));
    }

    #[test]
    fn timings_only_on_request() {
        let cfg = RunConfig { timings: true, ..RunConfig::default() };
        let r = run(&[Suite::Conj], &cfg).unwrap();
        assert!(r.checks.iter().all(|c| c.runtime_ms.is_some()));
    }

    #[test]
    fn export_has_relators() {
        let t = export_presentation(30, Some(5)).unwrap();
        assert!(t.starts_with("gen: a1 a2"));
        assert_eq!(t.lines().filter(|l| l.starts_with("rel:")).count(), 61);
        assert!(export_presentation(10, None).is_err());
    }
}
