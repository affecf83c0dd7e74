//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ffmzv::cli::parse_rational;
use ffmzv::laurent::{theta_floor, LaurentL, RationalK};
use ffmzv::motives::{index_set, psi_tilde_check, unit_point, PeriodSystem};
use ffmzv::relations::search::{exhaustive_relations, kernel_matches_exhaustive};
use ffmzv::relations::suite::{even_ratio_reconstruction, frobenius_case};
use ffmzv::relations::{
    check_hypotheses, find_linear_relations, independence_report, rational_reconstruct, Expr, IndependenceConfig,
    RelationQuery, SuiteConfig,
};
use ffmzv::scalars::FieldDesc;
use ffmzv::specials::at_poly::verify_at_identity;
use ffmzv::specials::mzv::bruteforce_cost;
use ffmzv::specials::power_sum::default_budget;
use ffmzv::specials::{carlitz_gamma, cmpl_eval, mzv_bruteforce, mzv_fast, Index};
use ffmzv::tate::{omega_functional_check, pi_reciprocal_check, KtPoly};

type Outcome = Result<String, String>;

fn field(q: u64) -> FieldDesc {
    FieldDesc::with_order(q).expect("supported field order")
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let (Ok(msg), Some(limit)) = (&out, limit) {
        if took > limit {
            out = Err(format!("{msg}; took {took:.2?}, limit {limit:?}"));
        }
    }
    (out, took)
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn omega_equation() -> Outcome {
    let mut worst = Duration::ZERO;
    for q in [2, 3, 4] {
        let f = field(q);
        let start = Instant::now();
        let r = omega_functional_check(&f, 8, 40, false).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        check(r.holds, format!("q = {q}: residual nonzero at {:?}", r.first_difference))?;
        check(took < Duration::from_secs(5), format!("q = {q} took {took:.2?}"))?;
        let faulty = omega_functional_check(&f, 8, 40, true).map_err(|e| e.to_string())?;
        check(!faulty.holds, format!("q = {q}: injected fault not detected"))?;
        worst = worst.max(took);
    }
    Ok(format!("zero residual for q = 2, 3, 4 at T = 8, N = 40; slowest {worst:.2?}; faults detected"))
}

fn period_reciprocal() -> Outcome {
    for q in [2, 3, 4] {
        let ok = pi_reciprocal_check(&field(q), 40).map_err(|e| e.to_string())?;
        check(ok, format!("q = {q}: Omega(theta) pi != 1"))?;
    }
    Ok("Omega(theta) pi = 1 to N = 40 for q = 2, 3, 4".into())
}

fn difference_equations() -> Outcome {
    let mut systems = 0;
    let mut blocks = 0;
    for q in [2, 3] {
        let f = field(q);
        for nu in Index::all_up_to(3, 5) {
            let u = unit_point(&f, nu.depth());
            let sys = PeriodSystem::build(&f, &nu, &u, 6, 25).map_err(|e| format!("q = {q}, {nu}: {e}"))?;
            let r = sys.verify_difference_equation().map_err(|e| e.to_string())?;
            check(r.all_zero, format!("q = {q}, {nu}: nonzero residual"))?;
            systems += 1;
            for el in index_set(nu.depth()).map_err(|e| e.to_string())? {
                let sub = sys.submatrix(el).map_err(|e| e.to_string())?;
                let r = sub.verify_difference_equation().map_err(|e| e.to_string())?;
                check(r.all_zero, format!("q = {q}, {nu}, block {el}: nonzero residual"))?;
                blocks += 1;
            }
        }
    }
    Ok(format!("{systems} systems and {blocks} submatrices with zero residual at T = 6, N = 25"))
}

fn oracle_equivalence() -> Outcome {
    let budget = default_budget();
    let mut cases = 0;
    let mut min_prec = 15;
    for q in [2, 3] {
        let f = field(q);
        for nu in Index::all_up_to(3, 5) {
            let Some(n) = (1..=15).rev().find(|&n| bruteforce_cost(&f, &nu, n) <= budget as u128) else {
                return Err(format!("q = {q}, {nu}: no precision fits the budget {budget}"));
            };
            let fast = mzv_fast(&f, &nu, n).map_err(|e| e.to_string())?;
            let brute = mzv_bruteforce(&f, &nu, n, budget).map_err(|e| e.to_string())?;
            check(fast.first_difference(&brute).is_none(), format!("q = {q}, {nu}, N = {n}: fast != enumeration"))?;
            cases += 1;
            min_prec = min_prec.min(n);
        }
    }
    Ok(format!("{cases} indices agree coefficient-exactly; N = 15 or the largest N within budget {budget} (lowest {min_prec})"))
}

fn frobenius_relations() -> Outcome {
    let mut cases = 0;
    for q in [2, 3, 4] {
        let f = field(q);
        for nu in Index::all_up_to(2, 4) {
            let (ok, diff) = frobenius_case(&f, &nu, 25).map_err(|e| e.to_string())?;
            check(ok, format!("q = {q}, {nu}: differ at s^{diff:?}"))?;
            cases += 1;
        }
    }
    Ok(format!("zeta(p nu) = zeta(nu)^p for {cases} cases at N = 25"))
}

fn even_rationality() -> Outcome {
    let config = SuiteConfig { prec: 40, prec_high: 60, degree_bound: 8, ..SuiteConfig::default() };
    let mut found = Vec::new();
    for (q, ns) in [(2u64, vec![1u32, 2, 3]), (3, vec![2, 4])] {
        let f = field(q);
        for n in ns {
            let r = even_ratio_reconstruction(&f, n, &config).map_err(|e| e.to_string())?;
            let v = r.value.filter(|_| r.stable).ok_or(format!("q = {q}, n = {n}: no stable reconstruction"))?;
            found.push(format!("q={q},n={n}: {v}"));
        }
    }
    Ok(format!("stable across N = 40, 60 ({})", found.join("; ")))
}

fn odd_non_reconstruction() -> Outcome {
    let f = field(3);
    let v: Expr = "zeta(1)/pi^1".parse().map_err(|e: ffmzv::Error| e.to_string())?;
    let v = v.eval(&f, 80).map_err(|e| e.to_string())?;
    let mut slacks = Vec::new();
    for b in 0..=8 {
        let r = rational_reconstruct(&v, b, 20).map_err(|e| e.to_string())?;
        check(r.value.is_none(), format!("B = {b}: unexpected fraction"))?;
        slacks.push(r.slack);
    }
    // Any fraction of degree <= B < 8 is also one of degree <= 8, so the
    // B = 8 scan carries the evidence for every smaller bound.
    check(slacks[8] >= 20, format!("B = 8: slack {}", slacks[8]))?;
    Ok(format!("no fraction for any B <= 8 at N = 80; covering scan B = 8 has slack {} (per-B slack {slacks:?})", slacks[8]))
}

fn anderson_thakur_small() -> Outcome {
    let budget = default_budget();
    let mut cases = 0;
    for q in [2, 3, 4] {
        let f = field(q);
        for n in 1..=q as u32 {
            let nu = Index::new(vec![n]).map_err(|e| e.to_string())?;
            let gamma = carlitz_gamma(&f, n as u64).map_err(|e| e.to_string())?;
            check(gamma.is_one(), format!("q = {q}, n = {n}: Gamma_n != 1"))?;
            let li = cmpl_eval(&f, &nu, &[RationalK::one(&f)], 25).map_err(|e| e.to_string())?;
            let z = mzv_fast(&f, &nu, 25).map_err(|e| e.to_string())?;
            let rhs = LaurentL::from_poly(&gamma).mul(&z).map_err(|e| e.to_string())?;
            check(li.first_difference(&rhs).is_none(), format!("q = {q}, n = {n}: Li_n(1) != Gamma_n zeta(n)"))?;
            let oracle_prec = (1..=25).rev().find(|&p| bruteforce_cost(&f, &nu, p) <= budget as u128).unwrap_or(1);
            let ok = verify_at_identity(&f, n, &KtPoly::one(&f), oracle_prec).map_err(|e| e.to_string())?;
            check(ok, format!("q = {q}, n = {n}: H = 1 rejected by the enumeration oracle"))?;
            cases += 1;
        }
    }
    Ok(format!("Li_n(1) = Gamma_n zeta(n) to N = 25 for {cases} cases; H = 1 confirmed by enumeration"))
}

fn independence_consistency() -> Outcome {
    let f = field(3);
    let nu: Index = "1,5".parse().map_err(|e: ffmzv::Error| e.to_string())?;
    let config = IndependenceConfig { degree_bound: 3, prec: 60, slack_min: 20, ..IndependenceConfig::default() };
    let r = independence_report(&f, &nu, &unit_point(&f, 2), &config).map_err(|e| e.to_string())?;
    check(r.value_labels.len() == 4, format!("{} values", r.value_labels.len()))?;
    check(r.relation_count == 0, format!("{} relations persist at N = {}", r.relation_count, config.prec_check))?;
    check(r.linear.slack >= 20 && r.monomial.slack >= 20, "slack below 20")?;
    let h = check_hypotheses(&f, &nu);
    check(h.odd_parts && h.non_p_power_ratios, "hypothesis checker rejected (1,5)")?;
    Ok(format!(
        "4 values, {} monomials: 0 stable relations at B = 3 (slack {} / {}); {} candidate(s) at N = 60 vanish at N = {}; hypotheses met",
        r.monomial_labels.len(),
        r.linear.slack,
        r.monomial.slack,
        r.unstable_count,
        config.prec_check
    ))
}

fn psi_tilde_formula() -> Outcome {
    let f = field(2);
    let mut done = Vec::new();
    for s in ["1", "2", "1,1"] {
        let nu: Index = s.parse().map_err(|e: ffmzv::Error| e.to_string())?;
        let r = psi_tilde_check(&f, &nu, None, 4, 20).map_err(|e| format!("{nu}: {e}"))?;
        check(r.all_equal, format!("{nu}: entries differ"))?;
        done.push(nu.to_string());
    }
    Ok(format!("closed formula matches for {} at T = 4, N = 20", done.join(", ")))
}

fn detector_completeness() -> Outcome {
    let f = field(2);
    let eval = |s: &str| -> Result<LaurentL, String> {
        s.parse::<Expr>().and_then(|e| e.eval(&f, 40)).map_err(|e| e.to_string())
    };
    let inv = parse_rational(&f, "1/(theta+1)")
        .and_then(|r| r.to_laurent(theta_floor(2, 40)))
        .map_err(|e| e.to_string())?;
    let pairs = vec![
        ("zeta(2), zeta(1)^2", vec![eval("zeta(2)")?, eval("zeta(1)^2")?]),
        ("zeta(1), pi", vec![eval("zeta(1)")?, eval("pi")?]),
        ("1, 1/(theta+1)", vec![LaurentL::one(&f), inv]),
    ];
    let mut dims = Vec::new();
    for (name, values) in pairs {
        let query = RelationQuery::new(values, 1).with_slack(20);
        let basis = find_linear_relations(&query).map_err(|e| e.to_string())?;
        let all = exhaustive_relations(&query).map_err(|e| e.to_string())?;
        check(kernel_matches_exhaustive(&basis, &all), format!("{name}: kernel differs from exhaustive scan"))?;
        dims.push(format!("{{{name}}}: dim {}", basis.relations.len()));
    }
    Ok(format!("kernel = exhaustive scan over 16 tuples ({})", dims.join(", ")))
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, Option<Duration>, fn() -> Outcome)> = vec![
        (1, None, omega_equation),
        (2, Some(Duration::from_secs(5)), period_reciprocal),
        (3, Some(Duration::from_secs(60)), difference_equations),
        (4, Some(Duration::from_secs(120)), oracle_equivalence),
        (5, None, frobenius_relations),
        (6, None, even_rationality),
        (7, None, odd_non_reconstruction),
        (8, None, anderson_thakur_small),
        (9, Some(Duration::from_secs(120)), independence_consistency),
        (10, None, psi_tilde_formula),
        (11, None, detector_completeness),
    ];
    let mut failed = 0;
    for (n, limit, run) in criteria {
        let (out, took) = timed(limit, run);
        match out {
            Ok(msg) => println!("criterion {n}: PASS ({took:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL ({took:.2?}) {msg}");
            }
        }
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
