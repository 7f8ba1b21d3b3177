use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symmec::explicit::ExplicitMdp;
use symmec::generate::{generate, Family, GenParams};
use symmec::mec::{default_gamma, symbolic_mec};
use symmec::symbolic::{AllocEvent, Backend, EdgeRelation, SymbolicMdp, Universe, VertexId, VertexSet};
use symmec::Error;

fn ids(s: &VertexSet) -> Vec<u32> {
    s.members().into_iter().map(|v| v.0).collect()
}

fn set(u: &Universe, xs: &[u32]) -> VertexSet {
    u.from_ids(xs.iter().copied().map(VertexId)).unwrap()
}

#[test]
fn pre_post_pick_cardinality() {
    for backend in [Backend::BitVector, Backend::Sparse] {
        let u = Universe::new(5, backend);
        let e = EdgeRelation::from_edges(
            &u,
            [(0, 1), (1, 2), (2, 0), (3, 2), (4, 3)].map(|(a, b)| (VertexId(a), VertexId(b))),
        )
        .unwrap();
        let s = set(&u, &[2]);
        assert_eq!(ids(&e.pre(&s).unwrap()), vec![1, 3]);
        assert_eq!(ids(&e.post(&s).unwrap()), vec![0]);
        assert_eq!(ids(&e.pre(&u.empty()).unwrap()), Vec::<u32>::new());
        assert_eq!(set(&u, &[4, 1, 3]).pick().unwrap(), VertexId(1));
        assert!(matches!(u.empty().pick(), Err(Error::EmptyPick)));
        assert_eq!(set(&u, &[0, 2, 4]).cardinality(), 3);

        let m = u.meter_snapshot();
        assert_eq!((m.pre, m.post, m.pick, m.cardinality), (2, 1, 2, 1));

        let p = set(&u, &[0, 1]).product(&set(&u, &[3])).unwrap();
        assert_eq!(ids(&p.pre(&set(&u, &[3])).unwrap()), vec![0, 1]);
        assert_eq!(ids(&p.post(&set(&u, &[1])).unwrap()), vec![3]);
        assert!(p.pre(&set(&u, &[2])).unwrap().is_empty());
    }
}

#[test]
fn universes_do_not_mix() {
    let a = Universe::new(4, Backend::BitVector);
    let b = Universe::new(4, Backend::BitVector);
    assert!(matches!(a.full().union(&b.full()), Err(Error::UniverseMismatch { .. })));
    assert!(matches!(
        a.singleton(VertexId(4)),
        Err(Error::VertexOutOfRange { id: 4, n: 4 })
    ));
}

struct Twin {
    sets: Vec<(VertexSet, VertexSet)>,
    rels: Vec<(EdgeRelation, EdgeRelation)>,
}

fn random_ids(rng: &mut ChaCha8Rng, n: usize) -> Vec<VertexId> {
    let p: f64 = rng.gen();
    (0..n as u32).filter(|_| rng.gen_bool(p)).map(VertexId).collect()
}

// Drives both backends through the same random sequence and compares every
// result and every meter reading.
#[test]
fn backends_are_interchangeable() {
    let n = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dense = Universe::new(n, Backend::BitVector);
    let sparse = Universe::new(n, Backend::Sparse);
    let mut t = Twin {
        sets: Vec::new(),
        rels: Vec::new(),
    };
    for _ in 0..4 {
        let x = random_ids(&mut rng, n);
        t.sets
            .push((dense.from_ids(x.clone()).unwrap(), sparse.from_ids(x).unwrap()));
    }
    let edges: Vec<_> = (0..120)
        .map(|_| {
            (
                VertexId(rng.gen_range(0..n as u32)),
                VertexId(rng.gen_range(0..n as u32)),
            )
        })
        .collect();
    t.rels.push((
        EdgeRelation::from_edges(&dense, edges.clone()).unwrap(),
        EdgeRelation::from_edges(&sparse, edges).unwrap(),
    ));

    for step in 0..12_000 {
        let i = rng.gen_range(0..t.sets.len());
        let j = rng.gen_range(0..t.sets.len());
        let r = rng.gen_range(0..t.rels.len());
        let op = rng.gen_range(0..16);
        let (a, b) = (&t.sets[i], &t.sets[j]);
        let new_set = match op {
            0 => Some((a.0.union(&b.0).unwrap(), a.1.union(&b.1).unwrap())),
            1 => Some((a.0.intersect(&b.0).unwrap(), a.1.intersect(&b.1).unwrap())),
            2 => Some((a.0.difference(&b.0).unwrap(), a.1.difference(&b.1).unwrap())),
            3 => Some((t.rels[r].0.pre(&a.0).unwrap(), t.rels[r].1.pre(&a.1).unwrap())),
            4 => Some((t.rels[r].0.post(&a.0).unwrap(), t.rels[r].1.post(&a.1).unwrap())),
            5 => {
                assert_eq!(a.0.is_subset(&b.0).unwrap(), a.1.is_subset(&b.1).unwrap());
                assert_eq!(a.0.equals(&b.0).unwrap(), a.1.equals(&b.1).unwrap());
                assert_eq!(a.0.is_disjoint(&b.0).unwrap(), a.1.is_disjoint(&b.1).unwrap());
                None
            }
            6 => {
                assert_eq!(a.0.is_empty(), a.1.is_empty());
                assert_eq!(a.0.cardinality(), a.1.cardinality());
                match (a.0.pick(), a.1.pick()) {
                    (Ok(x), Ok(y)) => assert_eq!(x, y),
                    (Err(Error::EmptyPick), Err(Error::EmptyPick)) => {}
                    other => panic!("pick disagrees: {other:?}"),
                }
                None
            }
            7 => {
                let rel = (a.0.product(&b.0).unwrap(), a.1.product(&b.1).unwrap());
                if t.rels.len() < 6 {
                    t.rels.push(rel);
                }
                None
            }
            8..=10 if t.rels.len() > 1 => {
                let k = rng.gen_range(0..t.rels.len());
                let (x, y) = (t.rels[k].0.copy(), t.rels[k].1.copy());
                let rel = &mut t.rels[r];
                match op {
                    8 => {
                        rel.0.union_with(&x).unwrap();
                        rel.1.union_with(&y).unwrap();
                    }
                    9 => {
                        rel.0.intersect_with(&x).unwrap();
                        rel.1.intersect_with(&y).unwrap();
                    }
                    _ => {
                        rel.0.difference_with(&x).unwrap();
                        rel.1.difference_with(&y).unwrap();
                    }
                }
                assert_eq!(rel.0.edges_unmetered(), rel.1.edges_unmetered());
                assert_eq!(rel.0.is_subset(&x).unwrap(), rel.1.is_subset(&y).unwrap());
                None
            }
            11 => {
                let b = (b.0.copy(), b.1.copy());
                let a = &mut t.sets[i];
                match rng.gen_range(0..3) {
                    0 => {
                        a.0.union_with(&b.0).unwrap();
                        a.1.union_with(&b.1).unwrap();
                    }
                    1 => {
                        a.0.intersect_with(&b.0).unwrap();
                        a.1.intersect_with(&b.1).unwrap();
                    }
                    _ => {
                        a.0.difference_with(&b.0).unwrap();
                        a.1.difference_with(&b.1).unwrap();
                    }
                }
                None
            }
            12 => {
                let x = random_ids(&mut rng, n);
                Some((dense.from_ids(x.clone()).unwrap(), sparse.from_ids(x).unwrap()))
            }
            _ => None,
        };
        if let Some(s) = new_set {
            assert_eq!(s.0.members(), s.1.members(), "step {step}");
            if t.sets.len() < 12 {
                t.sets.push(s);
            } else {
                t.sets[rng.gen_range(0..12)] = s;
            }
        }
        if step % 500 == 0 && t.sets.len() > 2 {
            t.sets.swap_remove(rng.gen_range(0..t.sets.len()));
        }
        assert_eq!(dense.meter_snapshot(), sparse.meter_snapshot(), "step {step}");
    }
    for (x, y) in &t.sets {
        assert_eq!(x.members(), y.members());
    }
}

#[test]
fn peak_tracks_live_sets() {
    let u = Universe::new(8, Backend::BitVector);
    let a = u.full();
    {
        let b = a.copy();
        let _c = a.union(&b).unwrap();
        assert_eq!(u.meter_snapshot().live_sets, 3);
    }
    let m = u.meter_snapshot();
    assert_eq!((m.live_sets, m.peak_live_sets), (1, 3));

    u.meter_reset();
    let m = u.meter_snapshot();
    assert_eq!((m.total_ops(), m.live_sets, m.peak_live_sets), (0, 1, 1));
    let r = a.product(&a).unwrap();
    assert_eq!(u.meter_snapshot().peak_live_sets, 2);
    drop(r);
    drop(a);
    assert_eq!(u.meter_snapshot().live_sets, 0);
}

#[test]
fn in_place_ops_allocate_nothing() {
    let u = Universe::new(8, Backend::Sparse);
    let mut a = set(&u, &[1, 2]);
    let b = set(&u, &[2, 3]);
    let before = u.meter_snapshot();
    a.union_with(&b).unwrap();
    a.difference_with(&set(&u, &[1])).unwrap();
    let after = u.meter_snapshot();
    assert_eq!(ids(&a), vec![2, 3]);
    assert_eq!(after.basic_set - before.basic_set, 2);
    assert_eq!(after.peak_live_sets, 3);
    assert_eq!(after.live_sets, 2);
}

fn replay_peak(start: u64, trace: &[AllocEvent]) -> (u64, u64) {
    let mut live = start as i64;
    let mut peak = live;
    for e in trace {
        live += match e {
            AllocEvent::Alloc => 1,
            AllocEvent::Free => -1,
        };
        assert!(live >= 0);
        peak = peak.max(live);
    }
    (live as u64, peak as u64)
}

#[test]
fn alloc_trace_replays_to_the_reported_peak() {
    for seed in 0..5 {
        let mut params = GenParams::new(Family::Uniform, 64, seed);
        params.random_fraction = 0.3;
        let g = generate(&params).unwrap();
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let u = p.universe().clone();
        u.meter_reset();
        let start = u.meter_snapshot().live_sets;
        u.start_alloc_trace();
        let (d, _) = symbolic_mec(&p, default_gamma(64)).unwrap();
        let trace = u.take_alloc_trace();
        let m = u.meter_snapshot();
        assert!(!trace.is_empty());
        assert_eq!(replay_peak(start, &trace), (m.live_sets, m.peak_live_sets));
        assert_eq!(m.live_sets, start, "every temporary set is released");
        assert!(!d.mecs.is_empty() || !d.non_mec.is_empty());
    }
}

#[test]
fn counters_never_decrease() {
    let g = generate(&GenParams::new(Family::CycleChain, 64, 3)).unwrap();
    let p = SymbolicMdp::from_explicit(&g, Backend::Sparse).unwrap();
    let u = p.universe().clone();
    let mut last = u.meter_snapshot();
    let mut checks = 0;
    symmec::mec::symbolic_mec_stream(&p, 8, false, |m| {
        let now = m.universe().meter_snapshot();
        for kind in [
            symmec::symbolic::OpKind::Pre,
            symmec::symbolic::OpKind::Post,
            symmec::symbolic::OpKind::BasicSet,
            symmec::symbolic::OpKind::Pick,
            symmec::symbolic::OpKind::Cardinality,
        ] {
            assert!(now.count(kind) >= last.count(kind));
        }
        assert!(now.peak_live_sets >= last.peak_live_sets);
        assert!(now.peak_live_sets >= now.live_sets);
        last = now;
        checks += 1;
        Ok(())
    })
    .unwrap();
    assert!(checks > 0);
}

fn arb_mdp() -> impl Strategy<Value = ExplicitMdp> {
    (2usize..24).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec((0..n, 1..n), n..4 * n),
        )
            .prop_map(move |(random, pairs)| {
                let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
                edges.extend(pairs.into_iter().map(|(a, d)| (a, (a + d) % n)));
                ExplicitMdp::from_edges(n, random, edges)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mirror_round_trips(g in arb_mdp(), sparse in any::<bool>()) {
        let backend = if sparse { Backend::Sparse } else { Backend::BitVector };
        let p = SymbolicMdp::from_explicit(&g, backend).unwrap();
        p.validate(true).unwrap();
        prop_assert_eq!(p.to_explicit(), g.clone());
        for v in 0..g.n() {
            let s = p.universe().singleton(VertexId(v as u32)).unwrap();
            let post: Vec<usize> = p.post(&s).unwrap().members().iter().map(|x| x.index()).collect();
            let pre: Vec<usize> = p.pre(&s).unwrap().members().iter().map(|x| x.index()).collect();
            prop_assert_eq!(post, g.successors(v).to_vec());
            prop_assert_eq!(pre, g.predecessors(v).to_vec());
        }
    }

    #[test]
    fn set_algebra_matches_btreeset(
        a in prop::collection::btree_set(0u32..50, 0..50),
        b in prop::collection::btree_set(0u32..50, 0..50),
        sparse in any::<bool>(),
    ) {
        let u = Universe::new(50, if sparse { Backend::Sparse } else { Backend::BitVector });
        let x = u.from_ids(a.iter().copied().map(VertexId)).unwrap();
        let y = u.from_ids(b.iter().copied().map(VertexId)).unwrap();
        prop_assert_eq!(ids(&x.union(&y).unwrap()), a.union(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(ids(&x.intersect(&y).unwrap()), a.intersection(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(ids(&x.difference(&y).unwrap()), a.difference(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(x.is_subset(&y).unwrap(), a.is_subset(&b));
        prop_assert_eq!(x.is_disjoint(&y).unwrap(), a.is_disjoint(&b));
        prop_assert_eq!(x.cardinality(), a.len());
        prop_assert_eq!(x.pick().ok().map(|v| v.0), a.first().copied());
    }
}
