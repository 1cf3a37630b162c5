//! Sweeps over the modular claims about quadratic representations.
//!
//! Every claim becomes a [`VerificationReport`]; computation errors are
//! reported as failures with a note rather than returned.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::gf::make_field;
use crate::grp::{klein_four, special_subgroups, GroupPresentation, Perm, SpecialKind, DEFAULT_CAP};
use crate::harness::{obj, oracle, VerificationReport};

use super::{
    cyclic_profile, fingerprint, free_summand_count, irreducible_d, loewy_length, m_module, GModule, ModError,
    Partition, Restricted,
};

/// Which family of claims to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Odd p: every non-character `D^λ` has Loewy length ≥ 3 on `<(1 … p)>`.
    CyclicLoewy,
    /// The same statement for the alternating group.
    CyclicLoewyAlt,
    /// p = 2: only `D^{(n-1,1)}` with `H_n` is quadratic for `n ≥ 9`.
    QuadraticClassification,
    /// The alternating-group version, with subgroups `K^m × H̃_{n-4m}`.
    QuadraticClassificationAlt,
    /// `D^{(n-k,k)}` has a free summand on `H_{2k}`, plus the `M(2k)` facts.
    FreeSummand,
    /// 2-regular λ with at least three parts has Loewy length ≥ 3 on rank-2 subgroups of `S_6`.
    ThreePartLength,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::CyclicLoewy,
        Theorem::CyclicLoewyAlt,
        Theorem::QuadraticClassification,
        Theorem::QuadraticClassificationAlt,
        Theorem::FreeSummand,
        Theorem::ThreePartLength,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::CyclicLoewy => "cyclic-loewy",
            Theorem::CyclicLoewyAlt => "cyclic-loewy-alt",
            Theorem::QuadraticClassification => "quadratic-classification",
            Theorem::QuadraticClassificationAlt => "quadratic-classification-alt",
            Theorem::FreeSummand => "free-summand",
            Theorem::ThreePartLength => "three-part-length",
        }
    }
}

/// Largest degree swept over all partitions; above it only two-row
/// partitions are used.
pub const FULL_SWEEP_MAX_N: usize = 10;

fn guarded(id: &str, statement: &str, inputs: Value, f: impl FnOnce() -> Result<VerificationReport, ModError>) -> VerificationReport {
    f().unwrap_or_else(|e| {
        VerificationReport::check(id, statement, inputs, json!("no error"), json!(format!("error: {e}")))
            .with_note("computation failed")
    })
}

fn group(label: impl Into<String>, n: usize, gens: Vec<Perm>) -> Result<GroupPresentation, ModError> {
    Ok(GroupPresentation::permutation(label, n, gens)?)
}

fn long_cycle(p: usize, n: usize) -> Perm {
    let images: Vec<usize> = (0..n).map(|i| if i < p { (i + 1) % p } else { i }).collect();
    Perm::from_images(&images).expect("cycle")
}

fn h2k_in(k: usize, n: usize) -> Result<GroupPresentation, ModError> {
    let h = special_subgroups(2 * k, SpecialKind::H)?;
    let gens = h.perm_gens()?.iter().map(|g| g.extend(n)).collect();
    group(format!("H{}", 2 * k), n, gens)
}

/// `<(1 2), (3 4)>` inside `S_n`.
fn two_transpositions(n: usize) -> Result<GroupPresentation, ModError> {
    h2k_in(2, n)
}

/// Runs the sweep for one family. `ns` lists degrees; `p` is the
/// characteristic (ignored by the characteristic-2 families).
pub fn verify_appendix(theorem: Theorem, ns: &[usize], p: u64) -> Vec<VerificationReport> {
    verify_appendix_seeded(theorem, ns, p, 0)
}

/// As [`verify_appendix`]; `seed` drives the random modules of the
/// norm-rank validation.
pub fn verify_appendix_seeded(theorem: Theorem, ns: &[usize], p: u64, seed: u64) -> Vec<VerificationReport> {
    match theorem {
        Theorem::CyclicLoewy | Theorem::CyclicLoewyAlt => {
            let alt = theorem == Theorem::CyclicLoewyAlt;
            let mut out: Vec<VerificationReport> =
                ns.par_iter().filter(|&&n| n >= p as usize).map(|&n| cyclic_claim(n, p, alt)).collect();
            if !alt {
                out.extend(ns.iter().flat_map(|&n| named_profiles(n, p)));
            }
            out
        }
        Theorem::QuadraticClassification | Theorem::QuadraticClassificationAlt => {
            let alt = theorem == Theorem::QuadraticClassificationAlt;
            let mut out: Vec<VerificationReport> = ns.par_iter().map(|&n| quadratic_claim(n, alt)).collect();
            if alt {
                out.extend(ns.iter().filter(|&&n| n >= 4).map(|&n| alt_rank_record(n)));
            }
            out
        }
        Theorem::FreeSummand => free_summand_claims(ns, seed),
        Theorem::ThreePartLength => ns.par_iter().filter(|&&n| n >= 6).map(|&n| three_part_claim(n)).collect(),
    }
}

fn cyclic_claim(n: usize, p: u64, alt: bool) -> VerificationReport {
    let id = format!("{}/n={n}/p={p}", if alt { "cyclic-loewy-alt" } else { "cyclic-loewy" });
    let statement = if alt {
        "In odd characteristic p, every non-trivial irreducible of A_n (n >= p) has Loewy length at least 3 on the subgroup generated by (1 2 ... p)"
    } else {
        "In odd characteristic p, every irreducible of S_n (n >= p) that is not a character has Loewy length at least 3 on the subgroup generated by (1 2 ... p)"
    };
    let inputs = obj([("n", json!(n)), ("p", json!(p)), ("subgroup", json!(format!("<(1..{p})>")))]);
    guarded(&id, statement, inputs.clone(), || {
        let f = make_field(p, 1).map_err(crate::exactla::LaError::from)?;
        let c = long_cycle(p as usize, n);
        let cp = group(format!("C{p}"), n, vec![c])?;
        let mut lengths = serde_json::Map::new();
        let mut below = Vec::new();
        let mut mismatch = Vec::new();
        for lambda in Partition::all_regular(n, p) {
            let d = irreducible_d(&lambda, &f)?;
            if d.dim <= 1 {
                continue;
            }
            let len = loewy_length(&d, &cp)?.length;
            let profile = cyclic_profile(&d, &c)?;
            if profile.first().copied() != Some(len) {
                mismatch.push(lambda.to_string());
            }
            if len < 3 {
                below.push(lambda.to_string());
            }
            lengths.insert(lambda.to_string(), json!(len));
        }
        let computed = obj([("below_three", json!(below)), ("profile_mismatch", json!(mismatch))]);
        let expected = obj([("below_three", json!([])), ("profile_mismatch", json!([]))]);
        let mut inputs = inputs;
        inputs["loewy_lengths"] = Value::Object(lengths);
        let report = VerificationReport::check(&id, statement, inputs, expected, computed);
        // For n >= p + 2 a transposition commuting with the p-cycle swaps the
        // two constituents of a split restriction, so both have the length of
        // the S_n module. Below that the transfer is not argued.
        Ok(if alt && n < p as usize + 2 {
            report.partial().with_note("computed on the S_n module; split A_n constituents not separated for n < p + 2")
        } else if alt {
            report.with_note("computed on the S_n module restricted to A_n")
        } else {
            report
        })
    })
}

/// Specific Jordan profiles stated for small cases.
fn named_profiles(n: usize, p: u64) -> Vec<VerificationReport> {
    let cases: &[(&str, usize)] = match (n, p) {
        (5, 5) => &[("4,1", 5)],
        (4, 3) => &[("3,1", 3), ("2,1,1", 3)],
        _ => &[],
    };
    cases
        .iter()
        .map(|&(lambda, cycle)| {
            let id = format!("cyclic-profile/({lambda})/p={p}");
            let statement = "The p-cycle acts on this irreducible with a single Jordan block of size 3";
            let inputs = obj([("lambda", json!(format!("({lambda})"))), ("p", json!(p)), ("cycle_length", json!(cycle))]);
            guarded(&id, statement, inputs.clone(), || {
                let f = make_field(p, 1).map_err(crate::exactla::LaError::from)?;
                let d = irreducible_d(&lambda.parse()?, &f)?;
                let profile = cyclic_profile(&d, &long_cycle(cycle, n))?;
                Ok(VerificationReport::check(&id, statement, inputs, json!([3]), json!(profile)))
            })
        })
        .collect()
}

/// Maximal-rank elementary abelian 2-subgroups in the families used.
fn quadratic_subgroups(n: usize, alt: bool) -> Result<Vec<GroupPresentation>, ModError> {
    let mut out = Vec::new();
    for m in 0..=n / 4 {
        let kind = if alt { SpecialKind::KPowerTildeH(m) } else { SpecialKind::KPowerH(m) };
        let mut h = special_subgroups(n, kind)?;
        if m == 0 {
            h.label = if alt { format!("~H{n}") } else { format!("H{n}") };
        }
        out.push(h);
    }
    if alt {
        // keep only those of the largest rank
        let ranks: Vec<usize> = out
            .iter()
            .map(|h| crate::grp::is_elementary_abelian(h, 2, DEFAULT_CAP).map(|r| r.unwrap_or(0)))
            .collect::<Result<_, _>>()?;
        let best = ranks.iter().copied().max().unwrap_or(0);
        out = out.into_iter().zip(ranks).filter(|(_, r)| *r == best).map(|(h, _)| h).collect();
    }
    Ok(out)
}

fn quadratic_claim(n: usize, alt: bool) -> VerificationReport {
    let family = if alt { "quadratic-classification-alt" } else { "quadratic-classification" };
    let id = format!("{family}/n={n}");
    let statement = if alt {
        "In characteristic 2 with n >= 9, a non-trivial irreducible of A_n quadratic for a maximal rank elementary abelian 2-subgroup occurs only for n = 2, 3 mod 4, as D^(n-1,1) with ~H_n"
    } else {
        "In characteristic 2 with n >= 9, a non-trivial irreducible of S_n quadratic for a maximal rank elementary abelian 2-subgroup is D^(n-1,1) with H_n"
    };
    let two_row_only = n > FULL_SWEEP_MAX_N;
    let inputs = obj([
        ("n", json!(n)),
        ("p", json!(2)),
        ("partitions", json!(if two_row_only { "two-row" } else { "all 2-regular" })),
    ]);
    guarded(&id, statement, inputs.clone(), || {
        let f = make_field(2, 1).map_err(crate::exactla::LaError::from)?;
        let subgroups = quadratic_subgroups(n, alt)?;
        let lambdas: Vec<Partition> = Partition::all_regular(n, 2)
            .into_iter()
            .filter(|l| l.len() > 1 && (!two_row_only || l.len() == 2))
            .collect();
        let found: Vec<Vec<String>> = lambdas
            .par_iter()
            .map(|lambda| -> Result<Vec<String>, ModError> {
                let d = irreducible_d(lambda, &f)?;
                let mut hits = Vec::new();
                for h in &subgroups {
                    if loewy_length(&d, h)?.length <= 2 {
                        hits.push(format!("{lambda}@{}", h.label));
                    }
                }
                Ok(hits)
            })
            .collect::<Result<_, _>>()?;
        let found: Vec<String> = found.into_iter().flatten().collect();
        let mut inputs = inputs;
        inputs["subgroups"] = json!(subgroups.iter().map(|h| h.label.clone()).collect::<Vec<_>>());
        inputs["pairs_checked"] = json!(lambdas.len() * subgroups.len());
        let report = if n >= 9 {
            let expected: Vec<String> = if !alt {
                vec![format!("({},1)@H{n}", n - 1)]
            } else if n % 4 == 2 || n % 4 == 3 {
                vec![format!("({},1)@~H{n}", n - 1)]
            } else {
                Vec::new()
            };
            let r = VerificationReport::check(&id, statement, inputs, json!(expected), json!(found));
            if two_row_only {
                r.partial().with_note("sweep restricted to two-row partitions")
            } else if alt {
                r.with_note("computed on S_n modules restricted to subgroups of A_n")
            } else {
                r
            }
        } else if n == 8 && !alt {
            let target = "(5,3)@K^2xH0".to_string();
            let contains = found.contains(&target);
            let mut inputs = inputs;
            inputs["quadratic_pairs"] = json!(found);
            VerificationReport::check(
                &id,
                "At n = 8 the 8-dimensional D^(5,3) is quadratic for K x K, so the classification needs n >= 9",
                inputs,
                json!({ "contains": target, "present": true }),
                json!({ "contains": target, "present": contains }),
            )
        } else {
            VerificationReport::recorded(&id, statement, inputs, json!(found)).with_note("below the range of the statement")
        };
        Ok(report)
    })
}

fn alt_rank_record(n: usize) -> VerificationReport {
    let id = format!("alt-max-rank/n={n}");
    let statement = "Rank of the maximal rank elementary abelian 2-subgroups of A_n in the K^m x ~H_(n-4m) family; stated as 2b for n = 4b, 4b+1 and 2b-1 for n = 4b+2, 4b+3";
    let b = n / 4;
    let stated = if n % 4 < 2 { 2 * b } else { 2 * b - 1 };
    let inputs = obj([("n", json!(n)), ("stated", json!(stated))]);
    guarded(&id, statement, inputs.clone(), || {
        let ranks: Vec<usize> = (0..=n / 4)
            .map(|m| {
                let h = special_subgroups(n, SpecialKind::KPowerTildeH(m))?;
                Ok(crate::grp::is_elementary_abelian(&h, 2, DEFAULT_CAP)?.unwrap_or(0))
            })
            .collect::<Result<_, ModError>>()?;
        let computed = ranks.iter().copied().max().unwrap_or(0);
        let note = if computed == stated { "agrees with the stated rank" } else { "differs from the stated rank; sweeps use the computed rank" };
        Ok(VerificationReport::recorded(&id, statement, inputs, json!(computed)).with_note(note))
    })
}

fn free_summand_claims(ns: &[usize], seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let statement_val = "The norm-element rank equals the free summand count from an exhaustive decomposition";
    let val_inputs = obj([("groups", json!(["C2", "C2xC2"])), ("max_dim", json!(6)), ("seed", json!(seed)), ("per_group", json!(100))]);
    let validated = match oracle::validate_norm_rank(seed, 100) {
        Ok(v) => {
            let ok = v.mismatches.is_empty();
            out.push(VerificationReport::check(
                "free-summand/norm-rank-validation",
                statement_val,
                val_inputs,
                json!({ "checked": 200, "mismatches": [] }),
                json!({ "checked": v.checked, "mismatches": v.mismatches }),
            ));
            ok
        }
        Err(e) => {
            out.push(VerificationReport::check(
                "free-summand/norm-rank-validation",
                statement_val,
                val_inputs,
                json!("no error"),
                json!(format!("error: {e}")),
            ));
            false
        }
    };
    let f = make_field(2, 1).expect("GF(2)");

    let pairs: Vec<(usize, usize)> =
        ns.iter().flat_map(|&n| (2..=(n.saturating_sub(1)) / 2).map(move |k| (n, k))).collect();
    let statement = "D^(n-k,k) contains a free summand when restricted to H_2k";
    out.extend(pairs.par_iter().map(|&(n, k)| {
        let id = format!("free-summand/({},{k})", n - k);
        let inputs = obj([("n", json!(n)), ("k", json!(k)), ("subgroup", json!(format!("H{}", 2 * k)))]);
        guarded(&id, statement, inputs.clone(), || {
            let d = irreducible_d(&Partition::new(vec![n - k, k])?, &f)?;
            let count = free_summand_count(&d, &h2k_in(k, n)?, DEFAULT_CAP)?;
            let r = VerificationReport::check(&id, statement, inputs, json!({ "has_free_summand": true }), json!({ "has_free_summand": count >= 1 }));
            Ok(r.with_note(format!("free summand count {count}")))
        })
    }).collect::<Vec<_>>());

    for k in 1..=4 {
        let id = format!("free-summand/M({})", 2 * k);
        let statement = "M(2k), the restriction of D^(k+1,k) to S_2k, is a single copy of the regular module of H_2k";
        let inputs = obj([("k", json!(k))]);
        out.push(guarded(&id, statement, inputs.clone(), || {
            let m = m_module(k)?;
            let free = free_summand_count(&m, &special_subgroups(2 * k, SpecialKind::H)?, DEFAULT_CAP)?;
            Ok(VerificationReport::check(&id, statement, inputs, json!({ "dim": 1 << k, "free_count": 1 }), json!({ "dim": m.dim, "free_count": free })))
        }));
    }

    let id = "free-summand/M(4)=M(2)xM(2)";
    let statement = "Restricted to S_2 x S_2, M(4) matches M(2) tensor M(2); compared by fingerprint, not by an explicit isomorphism";
    out.push(guarded(id, statement, json!({}), || {
        let m2 = m_module(1)?.restrict(&special_subgroups(2, SpecialKind::H)?)?;
        let product = Restricted::outer_tensor(&m2, &m2)?.fingerprint(DEFAULT_CAP)?;
        let m4 = fingerprint(&m_module(2)?, &special_subgroups(4, SpecialKind::H)?, DEFAULT_CAP)?;
        Ok(VerificationReport::check(id, statement, json!({ "generators": ["(1 2)", "(3 4)"] }), json!(product), json!(m4))
            .with_note("fingerprint equality is the isomorphism proxy"))
    }));

    let k_cases: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| [(n, 1, 5), (n, 2, 7), (n, 3, 9)].into_iter().filter(|&(n, _, lo)| n >= lo).map(|(n, k, _)| (n, k)))
        .collect();
    let statement = "D^(n-k,k) contains a free summand when restricted to the Klein four-group K, for k = 1 (n >= 5), k = 2 (n >= 7), k = 3 (n >= 9)";
    out.extend(k_cases.par_iter().map(|&(n, k)| {
        let id = format!("free-summand-k/({},{k})", n - k);
        let inputs = obj([("n", json!(n)), ("k", json!(k)), ("subgroup", json!("K"))]);
        guarded(&id, statement, inputs.clone(), || {
            let d = irreducible_d(&Partition::new(vec![n - k, k])?, &f)?;
            let count = free_summand_count(&d, &klein_four(n)?, DEFAULT_CAP)?;
            Ok(VerificationReport::check(&id, statement, inputs, json!({ "has_free_summand": true }), json!({ "has_free_summand": count >= 1 }))
                .with_note(format!("free summand count {count}")))
        })
    }).collect::<Vec<_>>());

    if !validated {
        for r in out.iter_mut().skip(1) {
            r.note = Some(format!("{}; norm-rank validation did not pass", r.note.clone().unwrap_or_default()));
        }
    }
    out
}

fn three_part_claim(n: usize) -> VerificationReport {
    let id = format!("three-part-length/n={n}");
    let statement = "For 2-regular λ with at least three parts, D^λ has a free summand and Loewy length at least 3 on K and on <(1 2),(3 4)>";
    let inputs = obj([("n", json!(n)), ("p", json!(2)), ("subgroups", json!(["K", "H4"]))]);
    guarded(&id, statement, inputs.clone(), || {
        let f = make_field(2, 1).map_err(crate::exactla::LaError::from)?;
        let groups = [klein_four(n)?, two_transpositions(n)?];
        let lambdas: Vec<Partition> = Partition::all_regular(n, 2).into_iter().filter(|l| l.len() >= 3).collect();
        let failures: Vec<Vec<String>> = lambdas
            .par_iter()
            .map(|lambda| -> Result<Vec<String>, ModError> {
                let d: GModule = irreducible_d(lambda, &f)?;
                let mut bad = Vec::new();
                for h in &groups {
                    let len = loewy_length(&d, h)?.length;
                    let free = free_summand_count(&d, h, DEFAULT_CAP)?;
                    if len < 3 || free == 0 {
                        bad.push(format!("{lambda}@{}: length {len}, free {free}", h.label));
                    }
                }
                Ok(bad)
            })
            .collect::<Result<_, _>>()?;
        let failures: Vec<String> = failures.into_iter().flatten().collect();
        let mut inputs = inputs;
        inputs["partitions"] = json!(lambdas.iter().map(Partition::to_string).collect::<Vec<_>>());
        Ok(VerificationReport::check(&id, statement, inputs, json!([]), json!(failures)))
    })
}
