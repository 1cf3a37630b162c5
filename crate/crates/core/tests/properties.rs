use proptest::prelude::*;

use modsymp::dickson::{
    check_invariance, diagonal_rep, dickson_half_dim, lagrangian_pair, parabolic_trivial_subgroup, perm_irrep,
    ParabolicMode,
};
use modsymp::exactla::{joint_fixed_space, quotient_action, radical_of_form, Mat};
use modsymp::gf::{make_field, FieldSpec};
use modsymp::grp::{is_elementary_abelian, special_subgroups, GroupPresentation, Perm, SpecialKind, DEFAULT_CAP};
use modsymp::harness::oracle::tableau_count;
use modsymp::lietype::{group_membership, intersection_dim, make_classical, rp_reference, ug_generators, Family};
use modsymp::modrep::{
    cyclic_profile, free_summand_count, irreducible_d, loewy_length, specht_gram, specht_module, Partition,
};

const FIELDS: [(u64, u32); 12] =
    [(2, 1), (3, 1), (5, 1), (7, 1), (61, 1), (2, 2), (2, 4), (3, 2), (3, 4), (5, 2), (7, 3), (61, 4)];

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|(p, r)| make_field(p, r).unwrap())
}

fn mat_in(f: FieldSpec, max: usize) -> impl Strategy<Value = Mat> {
    let q = f.order();
    (1..=max, 1..=max)
        .prop_flat_map(move |(r, c)| (Just(r), Just(c), prop::collection::vec(0..q, r * c)))
        .prop_map(move |(r, c, data)| Mat::from_flat(&f, r, c, data))
}

fn any_mat(max: usize) -> impl Strategy<Value = Mat> {
    field().prop_flat_map(move |f| mat_in(f, max))
}

fn partition_of(n: usize) -> impl Strategy<Value = Partition> {
    let all = Partition::all(n);
    prop::sample::select(all)
}

fn regular_partition(n: usize, p: u64) -> impl Strategy<Value = Partition> {
    prop::sample::select(Partition::all_regular(n, p))
}

fn perm9() -> impl Strategy<Value = Vec<usize>> {
    Just((0..9).collect::<Vec<usize>>()).prop_shuffle()
}

fn product(field: &FieldSpec, dim: usize, mats: &[Mat], word: &[usize]) -> Mat {
    word.iter().fold(Mat::identity(field, dim), |acc, &i| acc.mul(&mats[i]))
}

/// `H_{2k}` on the first `2k` of `n` points.
fn h_prefix(k: usize, n: usize) -> GroupPresentation {
    let gens = special_subgroups(2 * k, SpecialKind::H).unwrap().perm_gens().unwrap().iter().map(|g| g.extend(n)).collect();
    GroupPresentation::permutation(format!("H{}", 2 * k), n, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_ops_commute_and_associate(f in field(), xs in prop::collection::vec(any::<u64>(), 3)) {
        let q = f.order();
        let (a, b, c) = (xs[0] % q, xs[1] % q, xs[2] % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, q - 1), 1);
        }
    }

    #[test]
    fn make_field_is_deterministic(i in 0..FIELDS.len()) {
        let (p, r) = FIELDS[i];
        let (a, b) = (make_field(p, r).unwrap(), make_field(p, r).unwrap());
        prop_assert_eq!(a.modulus(), b.modulus());
        prop_assert_eq!(a.descriptor(), b.descriptor());
    }

    #[test]
    fn rank_nullity_and_transpose(m in any_mat(12)) {
        let rank = m.rank();
        prop_assert_eq!(m.transpose().rank(), rank);
        let ker = m.kernel();
        prop_assert_eq!(rank + ker.dim(), m.cols());
        for v in ker.basis().to_rows() {
            prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn packed_and_generic_agree(m in mat_in(make_field(2, 1).unwrap(), 64), n in mat_in(make_field(2, 1).unwrap(), 64)) {
        prop_assert_eq!(m.rref(), m.rref_generic());
        prop_assert_eq!(m.kernel(), m.kernel_generic());
        let n = Mat::from_flat(m.field(), m.cols(), n.cols(), (0..m.cols() * n.cols()).map(|i| n.data()[i % n.data().len()]).collect());
        prop_assert_eq!(m.mul(&n), m.mul_generic(&n));
    }

    #[test]
    fn inverse_round_trip(m in any_mat(8)) {
        if m.is_square() {
            match m.inverse() {
                Ok(inv) => prop_assert!(m.mul(&inv).is_identity()),
                Err(_) => prop_assert!(m.rank() < m.rows()),
            }
        }
    }

    #[test]
    fn perm_group_laws(a in perm9(), b in perm9()) {
        let (a, b) = (Perm::from_images(&a).unwrap(), Perm::from_images(&b).unwrap());
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        prop_assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
        prop_assert!(a.pow(a.order()).is_identity());
        for i in 0..9 {
            prop_assert_eq!(a.compose(&b).apply(i), a.apply(b.apply(i)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn special_subgroups_have_advertised_rank(n in 2usize..=12, m in 0usize..=3, tilde in any::<bool>()) {
        prop_assume!(4 * m <= n && (!tilde || n >= 4));
        let kind = match (tilde, m) {
            (false, 0) => SpecialKind::H,
            (true, 0) => SpecialKind::TildeH,
            (false, m) => SpecialKind::KPowerH(m),
            (true, m) => SpecialKind::KPowerTildeH(m),
        };
        let h = special_subgroups(n, kind).unwrap();
        let rest = (n - 4 * m) / 2;
        let want = 2 * m + if tilde { rest.saturating_sub(1) } else { rest };
        prop_assert_eq!(is_elementary_abelian(&h, 2, DEFAULT_CAP).unwrap(), Some(want));
    }

    #[test]
    fn diagonal_rep_is_symplectic(n in 3usize..=7, p in prop::sample::select(vec![2u64, 3, 5])) {
        let rep = perm_irrep(n, p).unwrap();
        let (diag, form) = diagonal_rep(&rep).unwrap();
        prop_assert_eq!(diag.dim, 2 * rep.dim);
        prop_assert!(check_invariance(&diag, &form).unwrap());
    }

    #[test]
    fn parabolic_intersection_is_elementary_abelian(n in 5usize..=8) {
        let rep = perm_irrep(n, 2).unwrap();
        let w = lagrangian_pair(dickson_half_dim(n)).unwrap().w;
        let res = parabolic_trivial_subgroup(&rep, &w, &ParabolicMode::ExactEnum { cap: DEFAULT_CAP }).unwrap();
        let h = GroupPresentation::permutation("I", n, res.witness.clone()).unwrap();
        prop_assert_eq!(is_elementary_abelian(&h, 2, DEFAULT_CAP).unwrap(), Some(res.rank));
        prop_assert_eq!(res.order, 1 << res.rank);
    }

    #[test]
    fn root_elements_lie_in_the_unipotent_radical(
        family in prop::sample::select(vec![Family::SL, Family::Sp, Family::SOeven, Family::SOodd]),
        m in 2usize..=4,
        q in prop::sample::select(vec![2u64, 3, 4, 5]),
    ) {
        prop_assume!(!(family == Family::SOodd && q % 2 == 0));
        prop_assume!(!(family == Family::SOeven && m < 4));
        let spec = make_classical(family, m, q, false).unwrap();
        let w = spec.w_dim();
        for r in ug_generators(&spec).unwrap() {
            prop_assert!(group_membership(&r.matrix, &spec).unwrap(), "{}", r.root);
            let x = r.matrix.minus_identity();
            // trivial on W = first w coordinates, and on V/W
            for i in 0..spec.dim_v {
                for j in 0..spec.dim_v {
                    if j < w || i >= w {
                        prop_assert_eq!(x.get(i, j), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn intersection_dim_ignores_q(family in prop::sample::select(vec![Family::SL, Family::Sp]), m in 2usize..=4) {
        let dims: Vec<usize> = [2u64, 3, 4, 5]
            .iter()
            .map(|&q| intersection_dim(&make_classical(family, m, q, false).unwrap()).unwrap().computed)
            .collect();
        prop_assert!(dims.windows(2).all(|w| w[0] == w[1]), "{dims:?}");
        if family == Family::Sp {
            for q in [2u64, 4] {
                prop_assert_eq!(dims[0], rp_reference(Family::SOodd, m, q));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn specht_dim_is_hook_length(lambda in (1usize..=10).prop_flat_map(partition_of), p in prop::sample::select(vec![2u64, 3, 5])) {
        let s = specht_module(&lambda, &make_field(p, 1).unwrap()).unwrap();
        prop_assert_eq!(s.dim as u128, lambda.hook_length_dim());
        prop_assert_eq!(s.dim as u64, tableau_count(&lambda).unwrap());
    }

    #[test]
    fn branching_dimensions(lambda in (2usize..=9).prop_flat_map(partition_of)) {
        let f = make_field(3, 1).unwrap();
        let dim = specht_module(&lambda, &f).unwrap().dim;
        let sum: usize = lambda.remove_box().iter().map(|mu| specht_module(mu, &f).unwrap().dim).sum();
        prop_assert_eq!(dim, sum);
    }

    #[test]
    fn natural_irreducible_dims(n in 3usize..=12, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let d = irreducible_d(&Partition::new(vec![n - 1, 1]).unwrap(), &make_field(p, 1).unwrap()).unwrap();
        let want = if n as u64 % p == 0 { n - 2 } else { n - 1 };
        prop_assert_eq!(d.dim, want);
        if p == 2 {
            prop_assert_eq!(d.dim, 2 * dickson_half_dim(n));
        }
    }

    #[test]
    fn loewy_and_free_summand_bounds(
        (lambda, p) in (4usize..=8).prop_flat_map(|n| prop::sample::select(vec![2u64, 3]).prop_flat_map(move |p| (regular_partition(n, p), Just(p)))),
        k in 1usize..=2,
    ) {
        let n = lambda.n();
        let d = irreducible_d(&lambda, &make_field(p, 1).unwrap()).unwrap();
        if p == 2 {
            let h = h_prefix(k, n);
            let series = loewy_length(&d, &h).unwrap();
            prop_assert_eq!(series.layer_dims.iter().sum::<usize>(), d.dim);
            prop_assert_eq!(series.length, series.layer_dims.len());
            let free = free_summand_count(&d, &h, DEFAULT_CAP).unwrap();
            prop_assert!(free * (1 << k) <= d.dim);
        } else {
            let images: Vec<usize> = (0..n).map(|i| if i < 3 { (i + 1) % 3 } else { i }).collect();
            let c = Perm::from_images(&images).unwrap();
            let h = GroupPresentation::permutation("C3", n, vec![c.clone()]).unwrap();
            let series = loewy_length(&d, &h).unwrap();
            prop_assert_eq!(series.layer_dims.iter().sum::<usize>(), d.dim);
            let blocks = cyclic_profile(&d, &c).unwrap();
            prop_assert_eq!(blocks.iter().sum::<usize>(), d.dim);
            prop_assert_eq!(series.length, blocks.iter().copied().max().unwrap_or(0));
        }
    }

    #[test]
    fn fixed_space_and_quotient_action(
        lambda in (3usize..=7).prop_flat_map(|n| regular_partition(n, 2)),
        word in prop::collection::vec(0usize..6, 0..=8),
    ) {
        let f = make_field(2, 1).unwrap();
        let s = specht_module(&lambda, &f).unwrap();
        let gens = &s.gen_actions;
        let word: Vec<usize> = word.into_iter().filter(|&i| i < gens.len()).collect();

        let fixed = joint_fixed_space(&f, s.dim, gens).unwrap();
        for v in fixed.basis().to_rows() {
            for g in gens {
                prop_assert_eq!(g.mul_vec(&v), v.clone());
            }
        }

        let rad = radical_of_form(&specht_gram(&lambda, &f).unwrap()).unwrap();
        let quotient = quotient_action(gens, &rad).unwrap();
        let qdim = s.dim - rad.dim();
        let full = product(&f, s.dim, gens, &word);
        let induced = quotient_action(std::slice::from_ref(&full), &rad).unwrap().remove(0);
        prop_assert_eq!(induced, product(&f, qdim, &quotient, &word));
        for g in &quotient {
            prop_assert!(g.mul(g).is_identity());
        }
    }
}

#[test]
fn exterior_powers_at_p5() {
    let f = make_field(5, 1).unwrap();
    for k in 0..=3 {
        let mut parts = vec![5 - k];
        parts.extend(std::iter::repeat(1).take(k));
        let d = irreducible_d(&Partition::new(parts).unwrap(), &f).unwrap();
        let binom = [1, 3, 3, 1][k];
        assert_eq!(d.dim, binom, "k={k}");
    }
}

#[test]
fn lagrangian_duality_is_identity() {
    for d in 1..=8 {
        let pair = lagrangian_pair(d).unwrap();
        assert!(pair.duality.is_identity(), "d={d}");
        assert_eq!((pair.w.dim(), pair.w_dual.dim()), (d, d));
    }
}
