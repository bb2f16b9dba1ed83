use super::*;
use crate::problems::Problem;


fn small(name: &str, tau: usize) -> HeterogeneousProblem {
    HeterogeneousProblem::new(Problem::by_name(name).unwrap(), tau).unwrap()
}

/// A scaled-down configuration that keeps every code path alive.
fn quick(fe_s_max: usize, tau: usize, seed: u64) -> AlgorithmConfig {
    let mut cfg = AlgorithmConfig {
        fe_s_max,
        tau,
        n_train: 12,
        n_max: 12,
        w_max: 3,
        seed,
        front_size: 100,
        moea_population: 8,
        ..AlgorithmConfig::default()
    };
    cfg.gp.starts = 2;
    cfg.gp_refit_starts = 1;
    cfg.rvea.population = 12;
    cfg.ga.population = 8;
    cfg
}

#[test]
fn scheme_ids_round_trip() {
    for s in Scheme::ALL {
        assert_eq!(s.id().parse::<Scheme>().unwrap(), s);
        assert_eq!(s.to_string(), s.id());
    }
    assert_eq!("TC-SAEA".parse::<Scheme>().unwrap(), Scheme::Saea(Variant::Tc));
    assert!("k-rvea".parse::<Scheme>().is_err());
}

#[test]
fn config_validation() {
    assert!(AlgorithmConfig::default().validate().is_ok());
    let bad = [
        AlgorithmConfig { fe_s_max: 100, ..AlgorithmConfig::default() },
        AlgorithmConfig { u: 0, ..AlgorithmConfig::default() },
        AlgorithmConfig { tau: 1, ..AlgorithmConfig::default() },
        AlgorithmConfig { w_max: 0, ..AlgorithmConfig::default() },
        AlgorithmConfig { n_max: 99, ..AlgorithmConfig::default() },
        AlgorithmConfig { gp_refit_starts: 0, ..AlgorithmConfig::default() },
    ];
    for cfg in bad {
        assert!(cfg.validate().is_err(), "{cfg:?}");
    }
    assert_eq!(AlgorithmConfig::default().init_soea_budget(), 400);
}

#[test]
fn ledger_refuses_overruns() {
    let mut l = BudgetLedger::new(10, 3);
    l.charge_slow(10).unwrap();
    assert!(l.charge_slow(1).is_err());
    l.charge_fast(30).unwrap();
    assert!(l.charge_fast(1).is_err());
    assert!(l.in_lockstep(3));
}

#[test]
fn tau_mismatch_rejected() {
    let cfg = quick(20, 4, 0);
    assert!(run_scheme(Scheme::Saea(Variant::Tc), &small("dtlz1a:n=3", 5), &cfg).is_err());
}

#[test]
fn tc_ledger_stays_in_lockstep() {
    for (fe, tau) in [(18, 5), (19, 3), (21, 2)] {
        let cfg = quick(fe, tau, 3);
        let r = run_tc_saea(&small("dtlz1a:n=3", tau), &cfg).unwrap();
        assert_eq!(r.ledger.fe_s_used, fe);
        assert_eq!(r.ledger.fe_f_used, tau * fe);
        assert_eq!(r.archive.len(), fe);
        assert_eq!(r.trace[0].fe_s_used, cfg.n_train);
        for t in &r.trace {
            assert_eq!(t.fe_f_used, tau * t.fe_s_used, "iteration {}", t.iteration);
        }
        // the last batch is trimmed to the remaining slow budget
        assert_eq!(r.iterations(), (fe - cfg.n_train).div_ceil(cfg.u));
    }
}

#[test]
fn nt_never_transfers() {
    let r = run_scheme(Scheme::Saea(Variant::Nt), &small("dtlz1a:n=3", 5), &quick(24, 5, 1)).unwrap();
    assert!(r.trace.iter().all(|t| t.d_t_size == 0));
    assert!(r.transfer_log.is_empty());
    assert!(r.ledger.in_lockstep(5));
}

#[test]
fn tc_transfers_only_inside_interval() {
    let r = run_scheme(Scheme::Saea(Variant::Tc), &small("dtlz2:n=4", 5), &quick(27, 5, 2)).unwrap();
    assert_eq!(r.transfer_log.len(), r.iterations());
    for (batch, t) in r.transfer_log.iter().zip(&r.trace[1..]) {
        batch.verify().unwrap();
        assert_eq!(batch.len(), r.config.u * (r.config.tau - 1));
        for i in 0..batch.len() {
            let inside = TransferBatch::within_ci(batch.y_s_syn[i], batch.y_s_mean[i], batch.sigma_s[i]);
            assert_eq!(batch.selected[i], inside);
            assert_eq!((batch.y_c_a[i] + batch.y_f_a[i]).to_bits(), batch.y_s_syn[i].to_bits());
        }
        assert_eq!(t.d_t_size, batch.selected.iter().filter(|&&s| s).count());
    }
}

#[test]
fn ns_admits_every_auxiliary_row() {
    let r = run_scheme(Scheme::Saea(Variant::Ns), &small("dtlz2:n=4", 3), &quick(21, 3, 4)).unwrap();
    for (batch, t) in r.transfer_log.iter().zip(&r.trace[1..]) {
        assert_eq!(t.d_t_size, batch.len());
    }
}

#[test]
fn tcp_runs_with_quadratic_co_surrogate() {
    let r = run_scheme(Scheme::Saea(Variant::Tcp), &small("dtlz2:n=4", 3), &quick(18, 3, 5)).unwrap();
    assert_eq!(r.ledger.fe_s_used, 18);
    assert!(!r.transfer_log.is_empty());
}

#[test]
fn diagnostics_record_co_surrogate_error() {
    let mut cfg = quick(18, 3, 6);
    cfg.diagnostics = true;
    let r = run_tc_saea(&small("dtlz2:n=4", 3), &cfg).unwrap();
    assert!(r.trace[0].co_mse.is_none());
    assert!(r.trace[1..].iter().all(|t| t.co_mse.is_some_and(|m| m >= 0.0)));
    // diagnostic evaluations stay off the books
    assert_eq!(r.ledger.fe_f_used, 3 * 18);
}

#[test]
fn waiting_idles_the_fast_evaluator() {
    let r = run_waiting(&small("dtlz1a:n=3", 5), &quick(20, 5, 0)).unwrap();
    assert_eq!(r.ledger.fe_s_used, 20);
    assert_eq!(r.ledger.fe_f_used, 20);
    assert!(r.trace.iter().all(|t| t.fe_f_used == t.fe_s_used && t.d_t_size == 0));
}

#[test]
fn every_scheme_spends_the_slow_budget_exactly() {
    let p = small("dtlz1a:n=3", 4);
    for scheme in Scheme::ALL {
        let cfg = quick(26, 4, 9);
        let r = run_scheme(scheme, &p, &cfg).unwrap();
        assert_eq!(r.scheme, scheme);
        assert_eq!(r.ledger.fe_s_used, 26, "{scheme}");
        assert!(r.ledger.fe_f_used <= 4 * 26, "{scheme}");
        assert!(r.ledger.fe_f_used >= 26, "{scheme}");
        assert_eq!(r.archive.len(), 26, "{scheme}");
        let fe: Vec<usize> = r.trace.iter().map(|t| t.fe_s_used).collect();
        assert!(fe.windows(2).all(|w| w[0] < w[1]), "{scheme}: {fe:?}");
        assert_eq!(*fe.last().unwrap(), 26);
        for e in &r.archive {
            assert_eq!(p.problem().evaluate(&e.x).unwrap(), e.f);
        }
    }
}

#[test]
fn fast_first_spends_surplus_before_slow_evaluations() {
    let cfg = quick(20, 5, 1);
    let r = run_fast_first(&small("dtlz1a:n=3", 5), &cfg).unwrap();
    assert_eq!(r.trace[0].fe_s_used, cfg.n_train);
    assert_eq!(r.trace[0].fe_f_used, 4 * 20 + cfg.n_train);
    assert_eq!(r.ledger.fe_f_used, 5 * 20);
}

#[test]
fn runs_are_reproducible() {
    let p = small("dtlz2:n=4", 3);
    for scheme in [Scheme::Saea(Variant::Tc), Scheme::Brood, Scheme::Speculative] {
        let a = run_scheme(scheme, &p, &quick(18, 3, 11)).unwrap();
        let b = run_scheme(scheme, &p, &quick(18, 3, 11)).unwrap();
        let c = run_scheme(scheme, &p, &quick(18, 3, 12)).unwrap();
        assert_eq!(a.archive, b.archive, "{scheme}");
        assert_eq!(a.trace, b.trace, "{scheme}");
        assert_ne!(a.archive, c.archive, "{scheme}");
    }
}

#[test]
fn final_set_is_nondominated_subset() {
    let r = run_tc_saea(&small("dtlz2:n=4", 3), &quick(18, 3, 13)).unwrap();
    let set = r.final_set();
    assert!(!set.is_empty());
    for a in &set {
        assert!(r.archive.contains(a));
        assert!(!r.archive.iter().any(|b| crate::metrics::dominates(&b.f, &a.f)));
    }
    assert_eq!(set.len(), r.final_front().len());
}

#[test]
fn sub_seeds_differ() {
    let s: std::collections::HashSet<u64> = (0..100).map(|t| sub_seed(42, t)).collect();
    assert_eq!(s.len(), 100);
    assert_eq!(sub_seed(1, 2), sub_seed(1, 2));
}
