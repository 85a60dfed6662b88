use moead_core::*;

fn weights(m: usize, count: usize) -> Vec<WeightVector<f64>> {
    sld_weights(m, divisions_for_count(m, count).unwrap()).unwrap()
}

fn run(family: Family, algo: Algorithm, count: usize, budget: usize, seed: u64) -> RunState<f64> {
    let p = ProblemSpec::new(family);
    let w = weights(p.num_objectives(), count);
    Run::new(&p, algo, w, EngineParams::default(), budget, seed).unwrap().run().unwrap()
}

fn dump(st: &RunState<f64>) -> (Vec<u8>, Vec<String>) {
    let mut buf = Vec::new();
    st.archive.write_csv(&mut buf).unwrap();
    (buf, st.trace.iter().map(|r| r.to_csv()).collect())
}

#[test]
fn same_seed_same_outputs() {
    for algo in Algorithm::ALL {
        let a = run(Family::Zdt3, algo, 30, 6_000, 42);
        let b = run(Family::Zdt3, algo, 30, 6_000, 42);
        assert_eq!(dump(&a), dump(&b), "{algo}");
        let c = run(Family::Zdt3, algo, 30, 6_000, 43);
        assert_ne!(dump(&a).0, dump(&c).0, "{algo}");
    }
}

#[test]
fn budget_accounting_and_pairing() {
    for algo in Algorithm::ALL {
        let p = ProblemSpec::<f64>::new(Family::Zdt1);
        let mut r = Run::new(&p, algo, weights(2, 20), EngineParams::default(), 5_000, 3).unwrap();
        while !r.is_finished() {
            let before = r.state().n_fe;
            let pop = r.state().pop.len();
            r.step().unwrap();
            let st = r.state();
            assert_eq!(st.n_fe - before, pop);
            assert_eq!(st.neighbors.len(), st.pop.len());
            assert!(st.neighbors.rows().iter().all(|row| row.len() == st.pop.len().min(20)));
        }
        let st = r.into_state();
        assert!(st.n_fe >= 5_000 && st.n_fe < 5_000 + st.pop.len().max(20), "{algo}");
        for w in st.trace.windows(2) {
            assert_eq!(w[1].gen, w[0].gen + 1);
            assert_eq!(w[1].pop_size, w[0].pop_size + w[1].added - w[1].removed);
        }
    }
}

#[test]
fn awa_never_triggering_matches_plain_moead() {
    let p = ProblemSpec::<f64>::new(Family::Zdt2);
    let mut params = EngineParams::default();
    params.adaptation.awa_rate_evol = 1.0;
    let a = run_moead_awa(&p, weights(2, 50), &params, 8_000, 9).unwrap();
    let b = run_moead(&p, weights(2, 50), &params, 8_000, 9).unwrap();
    assert_eq!(dump(&a), dump(&b));
}

#[test]
fn awa_keeps_count_and_edges() {
    for family in Family::ZDT {
        let st = run(family, Algorithm::Awa, 50, 10_000, 1);
        assert!(st.trace.iter().all(|r| r.pop_size == 50));
        assert!(st.trace.iter().any(|r| r.added > 0), "{family}: no relocation happened");
        assert_eq!(st.weights().iter().filter(|w| w.is_edge()).count(), 2);
    }
}

#[test]
fn av_keeps_edges_and_changes_by_nav() {
    for family in [Family::Zdt1, Family::Dtlz2] {
        let p = ProblemSpec::<f64>::new(family);
        let m = p.num_objectives();
        let count = if m == 2 { 100 } else { 105 };
        let params = EngineParams::default();
        let mut r = Run::new(&p, Algorithm::Av, weights(m, count), params.clone(), 20_000, 4).unwrap();
        let mut changed = false;
        while !r.is_finished() {
            let pop = r.state().pop.len();
            let uea = r.state().archive.len();
            let nav = params.adaptation.vectors_to_change(pop);
            let row = r.step().unwrap().clone();
            if row.added > 0 {
                assert_eq!(row.added, nav.min(uea));
                changed = true;
            }
            if row.removed > 0 {
                assert!(row.removed <= nav);
                changed = true;
            }
            let st = r.state();
            assert_eq!(st.weights().iter().filter(|w| w.is_edge()).count(), m);
            if let Some(t) = row.u_thresh {
                assert_eq!(Some(t), st.tracker.u_thresh());
            }
        }
        assert!(changed, "{family}");
    }
}

#[test]
fn archive_stays_nondominated() {
    let st = run(Family::Dtlz7, Algorithm::Av, 21, 6_000, 8);
    let f = st.archive.objective_vectors();
    assert_eq!(nondominated_filter(&f).unwrap().len(), f.len());
}

#[test]
fn zdt1_plain_moead_hypervolume() {
    let st = run(Family::Zdt1, Algorithm::Moead, 100, 75_000, 1);
    let f = st.archive.objective_vectors();
    let hv: f64 = hypervolume(&f, &[1.0, 1.0]).unwrap();
    assert!((0.60..=2.0 / 3.0).contains(&hv), "{hv}");
}

#[test]
fn tiny_populations_run() {
    let p = ProblemSpec::<f64>::new(Family::Zdt1);
    let w = vec![WeightVector::new(vec![1.0, 0.0]).unwrap(), WeightVector::new(vec![0.0, 1.0]).unwrap()];
    for algo in Algorithm::ALL {
        let st = Run::new(&p, algo, w.clone(), EngineParams::default(), 500, 1).unwrap().run().unwrap();
        assert!(st.n_fe >= 500);
    }
}

#[test]
fn single_precision_run() {
    let p = ProblemSpec::<f32>::new(Family::Zdt1);
    let w = sld_weights::<f32>(2, 99).unwrap();
    let st = run_moead_av(&p, w, &EngineParams::default(), 20_000, 2).unwrap();
    let hv: f32 = hypervolume(&st.archive.objective_vectors(), &[1.0, 1.0]).unwrap();
    assert!(hv > 0.5, "{hv}");
}
