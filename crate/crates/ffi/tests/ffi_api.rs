use std::ffi::{CStr, CString};
use std::ptr;

use qdt_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qdt_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn tree(text: &str) -> *mut QdtTree {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_tree_parse(c.as_ptr(), &mut out) },
        QdtStatus::Ok
    );
    out
}

fn history(decays: &[u8]) -> *mut QdtHistory {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_history_from_decays(decays.as_ptr(), decays.len(), &mut out) },
        QdtStatus::Ok
    );
    out
}

#[test]
fn gate_matrices() {
    let mut m = [0.0; 8];
    assert_eq!(
        unsafe { qdt_gate_matrix(QdtGate::D, m.as_mut_ptr()) },
        QdtStatus::Ok
    );
    assert_eq!(m, [0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0]);
    assert_eq!(
        unsafe { qdt_gate_matrix(QdtGate::S, m.as_mut_ptr()) },
        QdtStatus::Ok
    );
    assert_eq!(m, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    assert_eq!(
        unsafe { qdt_gate_matrix(QdtGate::H, ptr::null_mut()) },
        QdtStatus::NullPointer
    );
}

#[test]
fn matrix_beliefs() {
    let (mut p1, mut p2) = (0.0, 0.0);
    let diag = [3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    assert_eq!(
        unsafe { qdt_matrix_beliefs(diag.as_ptr(), &mut p1, &mut p2) },
        QdtStatus::Ok
    );
    assert_eq!((p1, p2), (0.75, 0.25));
}

#[test]
fn parse_round_trip_and_errors() {
    let t = tree("H//X+Y*Z");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qdt_tree_to_text(t, &mut s) }, QdtStatus::Ok);
    assert_eq!(
        unsafe { CStr::from_ptr(s) }.to_str().unwrap(),
        "(H//(X+(Y*Z)))"
    );
    unsafe { qdt_string_free(s) };
    assert_eq!(unsafe { qdt_tree_depth(t) }, 4);
    unsafe { qdt_tree_free(t) };

    let bad = CString::new("(H+X").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_tree_parse(bad.as_ptr(), &mut out) },
        QdtStatus::ParseError
    );
    assert!(out.is_null());
    assert!(last_error().contains("unclosed"), "{}", last_error());

    assert_eq!(
        unsafe { qdt_tree_parse(ptr::null(), &mut out) },
        QdtStatus::NullPointer
    );
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { qdt_tree_parse(invalid.as_ptr().cast(), &mut out) },
        QdtStatus::InvalidUtf8
    );
}

#[test]
fn enumeration_overflow_and_range() {
    let t = tree("(H//X)*(H//X)*(H//X)");
    assert_eq!(unsafe { qdt_tree_strategy_count(t) }, 8);
    let mut list = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_tree_enumerate(t, 4, &mut list) },
        QdtStatus::Overflow
    );
    assert!(last_error().contains("8 strategies"));
    assert_eq!(
        unsafe { qdt_tree_enumerate(t, 0, &mut list) },
        QdtStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { qdt_tree_enumerate(t, 8, &mut list) },
        QdtStatus::Ok
    );
    assert_eq!(unsafe { qdt_strategy_list_len(list) }, 8);
    let mut info = QdtStrategyInfo::default();
    assert_eq!(
        unsafe { qdt_strategy_list_get(list, 8, &mut info) },
        QdtStatus::OutOfRange
    );
    assert_eq!(
        unsafe { qdt_strategy_list_get(list, 7, &mut info) },
        QdtStatus::Ok
    );
    assert_eq!((info.id, info.weight), (7, 0.125));
    unsafe {
        qdt_strategy_list_free(list);
        qdt_tree_free(t);
    }
}

#[test]
fn decisions_and_fitness() {
    let t = tree("(H+I)");
    let h = history(&[0, 0, 0, 1]);
    let rng = qdt_rng_new(5);
    let mut d = QdtDecision {
        action: QdtAction::BelieveDead,
        belief: 0.0,
        strategy_id: 9,
        p1: 0.0,
        p2: 0.0,
    };
    assert_eq!(unsafe { qdt_decide(t, rng, &mut d) }, QdtStatus::Ok);
    assert_eq!(d.action, QdtAction::BelieveAlive);
    assert!((d.belief - 1.0).abs() < 1e-12);

    let mut f = 0.0;
    assert_eq!(
        unsafe { qdt_fitness(t, h, QdtFitnessMode::Expected, 64, rng, &mut f) },
        QdtStatus::Ok
    );
    // (3² − 1²)/4
    assert!((f - 2.0).abs() < 1e-12);

    let mut report = QdtRunReport::default();
    assert_eq!(
        unsafe { qdt_simulate(t, h, 1, ptr::null(), &mut report) },
        QdtStatus::Ok
    );
    assert_eq!(
        (report.n, report.successes, report.success_rate),
        (4, 3, 0.75)
    );
    assert_eq!(report.total_value, 2.0);

    assert_eq!(
        unsafe { qdt_decide(t, ptr::null_mut(), &mut d) },
        QdtStatus::NullPointer
    );
    unsafe {
        qdt_rng_free(rng);
        qdt_history_free(h);
        qdt_tree_free(t);
    }
}

#[test]
fn history_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("h.csv").to_str().unwrap()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_history_generate(200, 0.3, 4, &mut h) },
        QdtStatus::Ok
    );
    assert_eq!(
        unsafe { qdt_history_write_csv(h, path.as_ptr()) },
        QdtStatus::Ok
    );

    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_history_read_csv(path.as_ptr(), &mut back) },
        QdtStatus::Ok
    );
    assert_eq!(unsafe { qdt_history_len(back) }, 200);
    for i in [0, 57, 199] {
        let (mut a, mut b) = (QdtRecord::default(), QdtRecord::default());
        unsafe {
            qdt_history_record(h, i, &mut a);
            qdt_history_record(back, i, &mut b);
        }
        assert_eq!(a, b);
        assert_eq!(a.k, i as u64 + 1);
        assert_eq!(a.v, 1);
    }
    let (mut o1, mut o2) = (0.0, 0.0);
    assert_eq!(
        unsafe { qdt_history_frequencies(back, &mut o1, &mut o2) },
        QdtStatus::Ok
    );
    assert_eq!(o1 + o2, 1.0);
    let mut rec = QdtRecord::default();
    assert_eq!(
        unsafe { qdt_history_record(back, 200, &mut rec) },
        QdtStatus::OutOfRange
    );

    let missing = CString::new(dir.path().join("nope.csv").to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { qdt_history_read_csv(missing.as_ptr(), &mut back) },
        QdtStatus::Io
    );
    let garbage = dir.path().join("bad.csv");
    std::fs::write(&garbage, "k,decayed,x,v\n1,0,5,1\n").unwrap();
    let garbage = CString::new(garbage.to_str().unwrap()).unwrap();
    let mut other = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_history_read_csv(garbage.as_ptr(), &mut other) },
        QdtStatus::ParseError
    );
    assert!(last_error().contains("row 1"));

    assert_eq!(
        unsafe { qdt_history_generate(0, 0.5, 1, &mut other) },
        QdtStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { qdt_history_generate(10, 2.0, 1, &mut other) },
        QdtStatus::InvalidArgument
    );
    unsafe {
        qdt_history_free(h);
        qdt_history_free(back);
    }
}

#[test]
fn evolution_handles() {
    let h = history(&[0; 100]);
    let mut cfg = qdt_gp_config_default();
    assert_eq!(cfg.population_size, 200);
    cfg.population_size = 30;
    cfg.generations = 10;
    cfg.seed = 2;
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { qdt_evolve(&cfg, h, &mut run) }, QdtStatus::Ok);
    assert_eq!(unsafe { qdt_evolution_generations(run) }, 10);
    let mut prev = f64::NEG_INFINITY;
    for i in 0..10 {
        let mut s = QdtGenerationStats::default();
        assert_eq!(
            unsafe { qdt_evolution_stats(run, i, &mut s) },
            QdtStatus::Ok
        );
        assert_eq!(s.generation, i);
        assert!(s.best_fitness >= prev);
        prev = s.best_fitness;
    }
    assert_eq!(unsafe { qdt_evolution_best_fitness(run) }, prev);
    let mut best = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_evolution_best_tree(run, &mut best) },
        QdtStatus::Ok
    );
    assert!(unsafe { qdt_tree_depth(best) } >= 1);

    cfg.elitism = cfg.population_size;
    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { qdt_evolve(&cfg, h, &mut bad) },
        QdtStatus::InvalidArgument
    );
    assert!(last_error().contains("elitism"));
    unsafe {
        qdt_tree_free(best);
        qdt_evolution_free(run);
        qdt_history_free(h);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        qdt_tree_free(ptr::null_mut());
        qdt_history_free(ptr::null_mut());
        qdt_rng_free(ptr::null_mut());
        qdt_strategy_list_free(ptr::null_mut());
        qdt_evolution_free(ptr::null_mut());
        qdt_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { qdt_tree_depth(ptr::null()) }, 0);
    assert!(unsafe { qdt_evolution_best_fitness(ptr::null()) }.is_nan());
}
