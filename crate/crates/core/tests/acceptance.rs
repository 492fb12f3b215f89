//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cuntz_core::construct::CyclicModel;
use cuntz_core::random::Sampling;
use cuntz_core::suites::{compare_backends, run_suite, RunOptions, SuiteName};
use cuntz_core::{CheckRecord, CheckReport, Exact, Status};

struct Outcome {
    ok: bool,
    detail: String,
}

/// Looks up `ids` in `checks`; returns the ids that did not pass.
fn failing(checks: &[CheckRecord], ids: &[&str]) -> Vec<String> {
    ids.iter()
        .filter(|id| checks.iter().find(|c| c.id == **id).map_or(true, |c| c.status != Status::Pass))
        .map(|id| id.to_string())
        .collect()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn suite(name: SuiteName, n: usize) -> (CheckReport, Duration) {
    let start = Instant::now();
    let report = run_suite(name, n, &RunOptions::default()).expect("valid suite arguments");
    (report, start.elapsed())
}

/// Runs `body` for every n, collecting failures and the slowest wall time.
fn per_rank(
    ranks: &[usize],
    budget: Duration,
    mut body: impl FnMut(usize) -> (Vec<String>, Duration),
) -> Outcome {
    let mut problems = Vec::new();
    let mut worst = Duration::ZERO;
    for &n in ranks {
        let (failed, took) = body(n);
        worst = worst.max(took);
        if !failed.is_empty() {
            problems.push(format!("n={n}: {}", failed.join(", ")));
        }
        if took >= budget {
            problems.push(format!("n={n}: {} over budget {}", secs(took), secs(budget)));
        }
    }
    let ok = problems.is_empty();
    let mut detail = format!("ranks {ranks:?}, slowest {} (budget {} each)", secs(worst), secs(budget));
    if !ok {
        detail.push_str("; ");
        detail.push_str(&problems.join("; "));
    }
    Outcome { ok, detail }
}

fn criterion_1() -> Outcome {
    per_rank(&[2, 3, 4, 5, 6], Duration::from_secs(5), |n| {
        let (report, took) = suite(SuiteName::Spectral, n);
        let ids = [
            "v_eigenvector",
            "v_unitary",
            "expectation_idempotent",
            "expectation_unital",
            "expectation_invariant",
            "components_sum_to_x",
        ];
        (failing(&report.checks, &ids), took)
    })
}

fn criterion_2() -> Outcome {
    let mut out = per_rank(&[2, 3, 4, 5, 6], Duration::from_secs(10), |n| {
        let start = Instant::now();
        let model = CyclicModel::new(&Exact, n).expect("model");
        let checks = model.model_checks(&Sampling { samples: 50, ..Sampling::default() });
        let ids = [
            "T_entry_formula",
            "T_isometries",
            "T_ranges_sum_to_identity",
            "alpha_v_equals_w",
            "w_powers_as_printed",
            "alpha_bigT_equals_s1",
            "w_s_w_adjoint_as_printed",
        ];
        (failing(&checks, &ids), start.elapsed())
    });
    if !out.ok {
        out.detail.push_str(" (opposite-sign forms w_powers and w_s_w_adjoint are reported by the cyclic-fixed suite)");
    }
    out
}

fn criterion_3() -> Outcome {
    let budget = Duration::from_secs(10);
    let start = Instant::now();
    let mut problems = Vec::new();
    for n in 2..=6 {
        let model = CyclicModel::new(&Exact, n).expect("model");
        let checks = model.membership_checks(&Sampling { samples: 50, ..Sampling::default() });
        let failed = failing(&checks, &["reconstruction_random_rows", "noncompatible_rejected"]);
        if !failed.is_empty() {
            problems.push(format!("n={n}: {}", failed.join(", ")));
        }
    }
    let took = start.elapsed();
    if took >= budget {
        problems.push(format!("{} over budget", secs(took)));
    }
    Outcome {
        ok: problems.is_empty(),
        detail: format!("50 rows and 50 perturbed matrices per n = 2..6 in {} (budget {}) {}", secs(took), secs(budget), problems.join("; ")),
    }
}

fn criterion_4() -> Outcome {
    per_rank(&[2, 3, 4, 5], Duration::from_secs(15), |n| {
        let start = Instant::now();
        let model = CyclicModel::new(&Exact, n).expect("model");
        let checks = model.fixed_generator_checks(&Sampling { samples: 25, ..Sampling::default() });
        let ids = ["R_fixed_by_lambda_C", "R_cuntz_relations", "alpha_R_as_printed", "alpha_intertwines_lambda_C"];
        (failing(&checks, &ids), start.elapsed())
    })
}

fn criterion_5() -> Outcome {
    per_rank(&[2, 4, 6], Duration::from_secs(20), |m| {
        let (report, took) = suite(SuiteName::Exchange, m);
        let ids = [
            "rho_squared_is_identity",
            "rho_entry_sign_law",
            "beta_tilde_v_equals_w",
            "beta_y_unscaled",
            "y_unscaled_cuntz_relations",
            "s_tilde_unscaled_cuntz_relations",
            "y_unscaled_fixed_by_lambda_E",
            "y_scaled_fixed_by_lambda_E",
            "y_scaled_cuntz_relations_finding",
        ];
        (failing(&report.checks, &ids), took)
    })
}

fn criterion_6() -> Outcome {
    per_rank(&[2], Duration::from_secs(5), |n| {
        let (report, took) = suite(SuiteName::Nogo, n);
        let ids = [
            "F_selfadjoint_unitary",
            "V_unitary",
            "V_T2_equals_T1",
            "AdZ2_V_equals_V_adjoint",
            "V_squared_is_minus_identity",
            "candidate_equations",
            "control_identity_equations",
        ];
        let mut failed = failing(&report.checks, &ids);
        for id in ["candidate_equations", "control_identity_equations"] {
            let emitted = report.check(id).and_then(|c| c.witness.as_ref()).map_or(false, |w| w["verdicts"].as_array().map_or(false, |v| v.len() == 17));
            if !emitted {
                failed.push(format!("{id} verdict vector missing"));
            }
        }
        (failed, took)
    })
}

fn criterion_7() -> Outcome {
    let runs: Vec<(SuiteName, usize)> = (2..=6)
        .map(|n| (SuiteName::Spectral, n))
        .chain((2..=6).map(|n| (SuiteName::CyclicFixed, n)))
        .chain([2, 4, 6].map(|m| (SuiteName::Exchange, m)))
        .chain([(SuiteName::Nogo, 2)])
        .collect();
    let (mut exact_ms, mut numeric_ms, mut verdicts) = (0u64, 0u64, 0usize);
    let mut problems = Vec::new();
    for (name, n) in runs {
        let cmp = compare_backends(name, n, &RunOptions::default()).expect("valid suite arguments");
        exact_ms += cmp.exact.elapsed_ms;
        numeric_ms += cmp.numeric.elapsed_ms;
        verdicts += cmp.verdict_count();
        if !cmp.agree() {
            problems.push(format!("{name} n={n}: {}", cmp.mismatches.join(", ")));
        }
    }
    if numeric_ms >= 2 * exact_ms.max(1) {
        problems.push(format!("numeric {numeric_ms} ms not under twice exact {exact_ms} ms"));
    }
    Outcome {
        ok: problems.is_empty(),
        detail: format!("{verdicts} verdicts compared; exact {exact_ms} ms, numeric {numeric_ms} ms {}", problems.join("; ")),
    }
}

fn criterion_8() -> Outcome {
    per_rank(&[2, 3, 4, 5, 6], Duration::from_secs(10), |n| {
        let (report, took) = suite(SuiteName::AlgebraLaws, n);
        let ids = ["associativity", "adjoint_anti_multiplicative", "expansion_preserves_equality", "cuntz_relation_invariance"];
        let mut failed = failing(&report.checks, &ids);
        let instances: usize = ids.iter().filter_map(|id| report.check(id)).map(|c| c.verdicts.len()).sum();
        if instances < 200 {
            failed.push(format!("only {instances} instances"));
        }
        (failed, took)
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("spectral decomposition", criterion_1),
        ("matrix model", criterion_2),
        ("membership and reconstruction", criterion_3),
        ("fixed-point generators", criterion_4),
        ("exchange model", criterion_5),
        ("no-go witness", criterion_6),
        ("backend agreement", criterion_7),
        ("algebra laws", criterion_8),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.ok;
        println!("{} criterion {} ({name}): {}", if o.ok { "PASS" } else { "FAIL" }, k + 1, o.detail.trim_end());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
