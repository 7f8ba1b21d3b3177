use proptest::prelude::*;
use symmec::explicit::{explicit_mec, explicit_mec_within, is_end_component, tarjan_scc_within, ExplicitMdp};
use symmec::generate::{generate, Family, GenParams};
use symmec::mec::{
    classical_mec, collapse_ec, default_gamma, gamma_for_epsilon, rout, symbolic_mec, CollapseMap, MecDecomposition,
};
use symmec::symbolic::{Backend, SymbolicMdp, VertexId};

fn instance(family: Family, n: usize, deg: f64, frac: f64, seed: u64) -> ExplicitMdp {
    let mut p = GenParams::new(family, n, seed);
    p.avg_degree = deg;
    p.random_fraction = frac;
    generate(&p).unwrap()
}

fn as_usize(d: &MecDecomposition) -> (Vec<Vec<usize>>, Vec<usize>) {
    (
        d.mecs.iter().map(|m| m.iter().map(|v| v.index()).collect()).collect(),
        d.non_mec.iter().map(|v| v.index()).collect(),
    )
}

fn check_all(g: &ExplicitMdp, gammas: &[usize]) {
    let want = explicit_mec(g);
    let p = SymbolicMdp::from_explicit(g, Backend::BitVector).unwrap();
    let (classical, _) = classical_mec(&p).unwrap();
    assert_eq!(as_usize(&classical), (want.mecs.clone(), want.non_mec.clone()));
    for &gamma in gammas {
        let (d, _) = symbolic_mec(&p, gamma).unwrap();
        assert_eq!(as_usize(&d), (want.mecs.clone(), want.non_mec.clone()), "gamma {gamma}");
    }
}

#[test]
fn spec_examples() {
    // one EC
    let g = ExplicitMdp::from_edges(3, vec![false, true, false], [(0, 1), (1, 0), (1, 2), (2, 0)]);
    let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
    let (d, _) = symbolic_mec(&p, default_gamma(3)).unwrap();
    assert_eq!(d.mecs, vec![vec![VertexId(0), VertexId(1), VertexId(2)]]);
    assert!(d.non_mec.is_empty());
    check_all(&g, &[1, 2, 3]);

    // chain of 2-cycles; each random exit leaves its cycle
    let g = ExplicitMdp::from_edges(
        8,
        vec![false, true, false, true, false, false, false, false],
        [
            (0, 1),
            (1, 0),
            (1, 2),
            (2, 3),
            (3, 2),
            (3, 4),
            (4, 5),
            (5, 4),
            (6, 7),
            (7, 6),
            (6, 0),
        ],
    );
    check_all(&g, &[1, 2, 4, 8]);
    let want = explicit_mec(&g);
    assert_eq!(want.mecs, vec![vec![4, 5], vec![6, 7]]);

    // player-1 2-cycle
    let g = ExplicitMdp::from_edges(2, vec![false, false], [(0, 1), (1, 0)]);
    check_all(&g, &[2]);
}

#[test]
fn gamma_selection() {
    assert_eq!(default_gamma(4096), ((2.0 * 64.0 + 2.0) * 12.0) as usize);
    assert_eq!(default_gamma(64), 64);
    assert_eq!(gamma_for_epsilon(4096, 0.5), default_gamma(4096));
    assert_eq!(gamma_for_epsilon(4096, 0.1), 4096);
    let g = gamma_for_epsilon(1 << 20, 0.4);
    assert!(g > default_gamma(1 << 20) && g < 1 << 20);
}

#[test]
fn random_suite_with_small_gammas() {
    let mut seed = 0;
    for n in [4usize, 9, 17, 33, 64] {
        for deg in [1.0, 2.0, 4.0] {
            for frac in [0.0, 0.3, 0.7, 1.0] {
                for family in Family::ALL {
                    if family == Family::CycleChain && n < 8 {
                        continue;
                    }
                    seed += 1;
                    let g = instance(family, n, deg, frac, seed);
                    let lg = (n as f64).log2().ceil() as usize;
                    check_all(&g, &[default_gamma(n), 2 * lg, 3 * lg, 1]);
                }
            }
        }
    }
}

#[test]
fn cycle_chain_takes_separator_branch() {
    let g = instance(Family::CycleChain, 600, 2.0, 0.2, 5);
    let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
    let want = explicit_mec(&g);
    let (d, stats) = symbolic_mec(&p, gamma_for_epsilon(600, 0.5)).unwrap();
    assert_eq!(as_usize(&d), (want.mecs, want.non_mec));
    assert!(stats.max_depth >= 1);
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn reported_mecs_are_sound_and_maximal(
        n in 2usize..40, deg in 1.0f64..5.0, frac in 0.0f64..=1.0, seed in any::<u64>(), gamma in 1usize..12
    ) {
        let g = instance(Family::Uniform, n, deg, frac, seed);
        let p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let (d, _) = symbolic_mec(&p, gamma).unwrap();
        let (mecs, _) = as_usize(&d);
        let mut mask = vec![false; n];
        for m in &mecs {
            prop_assert!(is_end_component(&g, m));
            for &v in m { mask[v] = true; }
        }
        prop_assert_eq!(tarjan_scc_within(&g, &mask).into_iter().filter(|c| c.len() > 1 || !mask[c[0]]).count(), mecs.len());
        for m in &mecs {
            prop_assert!(tarjan_scc_within(&g, &mask).contains(m));
        }
    }

    #[test]
    fn collapse_preserves_other_end_components(
        n in 4usize..30, deg in 1.5f64..4.0, frac in 0.0f64..=1.0, seed in any::<u64>()
    ) {
        let g = instance(Family::Uniform, n, deg, frac, seed);
        let before = explicit_mec(&g);
        let Some(x) = before.mecs.first().cloned() else { return Ok(()) };
        let mut p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        p.universe().set_verification(true);
        let xs = p.universe().from_ids(x.iter().map(|&v| VertexId(v as u32))).unwrap();
        let mut map = CollapseMap::new(n);
        let rep = collapse_ec(&mut p, &xs, &mut map).unwrap();
        p.validate(false).unwrap();
        let after_g = p.to_explicit();
        let live: Vec<bool> = (0..n).map(|v| p.vertices().contains_unmetered(VertexId(v as u32))).collect();
        let after = explicit_mec_within(&after_g, &live);
        // MECs disjoint from X are unchanged; X itself shrinks to its representative
        let mut expected: Vec<Vec<usize>> = before.mecs[1..].to_vec();
        expected.sort();
        let got: Vec<Vec<usize>> = after.mecs.clone();
        prop_assert_eq!(got, expected);
        prop_assert!(after.non_mec.contains(&rep.index()));
        prop_assert!(rout(&p, &p.universe().singleton(rep).unwrap()).unwrap().members().is_empty());
    }

    #[test]
    fn collapse_order_does_not_matter(
        n in 4usize..30, deg in 1.5f64..4.0, frac in 0.0f64..=1.0, seed in any::<u64>()
    ) {
        let g = instance(Family::Uniform, n, deg, frac, seed);
        let want = explicit_mec(&g);
        let Some(big) = want.mecs.first().cloned() else { return Ok(()) };
        // any 2-cycle inside the MEC that is itself an EC
        let sub = big.iter().flat_map(|&a| g.successors(a).iter().map(move |&b| (a, b)))
            .find(|&(a, b)| g.successors(b).contains(&a) && is_end_component(&g, &[a.min(b), a.max(b)]));
        let Some((a, b)) = sub else { return Ok(()) };
        let mut p = SymbolicMdp::from_explicit(&g, Backend::BitVector).unwrap();
        let mut map = CollapseMap::new(n);
        let s = p.universe().from_ids([VertexId(a as u32), VertexId(b as u32)]).unwrap();
        let r = collapse_ec(&mut p, &s, &mut map).unwrap();
        let rest = p.universe().from_ids(big.iter().map(|&v| VertexId(v as u32)).filter(|v| p.vertices().contains_unmetered(*v))).unwrap();
        prop_assert!(rest.contains_unmetered(r));
        let r2 = collapse_ec(&mut p, &rest, &mut map).unwrap();
        let expanded = map.expand(&p.universe().singleton(r2).unwrap()).unwrap();
        let got: Vec<usize> = expanded.members().into_iter().map(|v| v.index()).collect();
        prop_assert_eq!(got, big);
    }
}
