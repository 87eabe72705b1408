//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; run with
//! `cargo test -p abelcay --test acceptance`.
//!
//! Entries listed in `EXPECTED_RED` are checked as written and reported, but
//! do not fail the run; the suite does fail if one of them starts passing,
//! so the list cannot go stale.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use abelcay::{
    bounds_report, f_closed_form, f_count, make_dn, make_dnm, make_mn, minimum_distance_diagram,
    mn_membership, na2_formula, na_search, nc2_formula, nc_search, smith_normal_form,
    verify_witness, AbelianGroupSpec, BigInt, BigRational, CayleyDigraph, IntMatrix, QuotientGroup,
    SearchConfig,
};
use num_bigint::BigUint;
use num_traits::{One, Signed};

type Check = Result<(), String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

/// `(criterion, sub-check)` pairs known to fail, with the reason.
const EXPECTED_RED: &[(&str, &str)] = &[(
    "10b",
    "Cay(Z_84,{2,9,25}) has BFS diameter 10; the diameter-7 set is {2,9,35}",
)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn cyclic(n: u64, gens: &[i64]) -> CayleyDigraph {
    CayleyDigraph::new(
        AbelianGroupSpec::cyclic(n).unwrap(),
        gens.iter().map(|&g| vec![g]).collect(),
    )
    .unwrap()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn c1_snf_structure() -> Check {
    timed(Duration::from_secs(1), || {
        for n in 2..=8u64 {
            let m = make_mn(n).map_err(|e| e.to_string())?;
            let snf = smith_normal_form(&m);
            let mut expected = vec![BigInt::from(n + 1); n as usize];
            expected[0] = BigInt::one();
            ensure(snf.s == expected, || format!("n={n}: factors {:?}", snf.s))?;
            let product = snf.u.mul(&m).and_then(|um| um.mul(&snf.v)).unwrap();
            ensure(product == IntMatrix::diagonal(&expected), || {
                format!("n={n}: UMV != S")
            })?;
            ensure(snf.u.det().abs().is_one(), || format!("n={n}: det U"))?;
            ensure(snf.v.det().abs().is_one(), || format!("n={n}: det V"))?;
        }
        Ok(())
    })
}

fn c2_determinant() -> Check {
    for n in 2..=10u64 {
        let d = make_mn(n).unwrap().det();
        ensure(d == BigInt::from(n + 1).pow(n as u32 - 1), || {
            format!("n={n}: det {d}")
        })?;
    }
    Ok(())
}

fn c3_base_diameter() -> Check {
    timed(Duration::from_secs(10), || {
        for (n, order) in [(2u64, 3u64), (3, 16), (4, 125), (5, 1296)] {
            let want = n * (n - 1) / 2;
            for (name, g) in [
                (
                    "from_matrix",
                    CayleyDigraph::from_matrix(&make_mn(n).unwrap()).unwrap(),
                ),
                ("make_dn", make_dn(n).unwrap()),
            ] {
                let p = g.distance_profile().map_err(|e| e.to_string())?;
                ensure(p.order == order && p.diameter == want, || {
                    format!("n={n} {name}: order {}, diameter {}", p.order, p.diameter)
                })?;
            }
        }
        Ok(())
    })
}

fn c4_max_distance_count() -> Check {
    for n in 2..=5u64 {
        let p = make_dn(n).unwrap().distance_profile().unwrap();
        ensure(
            p.diameter == binom(n, 2) && p.at_max_distance() == factorial(n),
            || {
                format!(
                    "n={n}: {} vertices at distance {}",
                    p.at_max_distance(),
                    p.diameter
                )
            },
        )?;
    }
    Ok(())
}

fn c5_scaled_family() -> Check {
    timed(Duration::from_secs(60), || {
        for n in 2..=4u64 {
            for m in 1..=4u64 {
                let fam = make_dnm(n, m).unwrap();
                let p = fam.digraph.distance_profile().map_err(|e| e.to_string())?;
                let order = m.pow(n as u32) * (n + 1).pow(n as u32 - 1);
                let diameter = binom(n + 1, 2) * m - n;
                ensure(p.order == order && p.diameter == diameter, || {
                    format!("n={n} m={m}: order {}, diameter {}", p.order, p.diameter)
                })?;
            }
        }
        Ok(())
    })
}

fn c6_density() -> Check {
    let ms = |d: u64| if d <= 4 { 1..=4u64 } else { 1..=2 };
    for d in 2..=6u64 {
        let want = BigRational::new(BigInt::from(2).pow(d as u32), BigInt::from(d).pow(d as u32))
            / BigRational::from_integer(BigInt::from(d + 1));
        for m in ms(d) {
            let fam = make_dnm(d, m).unwrap();
            let p = fam.digraph.distance_profile().map_err(|e| e.to_string())?;
            let got = abelcay::cayley::density(&fam.digraph, &p).map_err(|e| e.to_string())?;
            ensure(got == want, || {
                format!("d={d} m={m}: density {got}, want {want}")
            })?;
        }
        let named = match d {
            2 => Some(BigRational::new(1.into(), 3.into())),
            3 => Some(BigRational::new(2.into(), 27.into())),
            _ => None,
        };
        if let Some(v) = named {
            ensure(want == v, || format!("d={d}: {want} != {v}"))?;
        }
    }
    Ok(())
}

/// Vectors in `[0, n−1]^m` whose descending sort `y` has `y_j <= n−1−j`.
fn staircase_count(m: usize, n: usize) -> u64 {
    let mut x = vec![0usize; m];
    let mut count = 0;
    loop {
        let mut y = x.clone();
        y.sort_unstable_by(|a, b| b.cmp(a));
        if y.iter().enumerate().all(|(j, &v)| v + j < n) {
            count += 1;
        }
        let mut i = 0;
        while i < m {
            x[i] += 1;
            if x[i] < n {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == m {
            return count;
        }
    }
}

fn c7_counting() -> Check {
    for n in 1..=12u64 {
        for m in 1..=n {
            let r = f_count(m, n).map_err(|e| e.to_string())?;
            let c = f_closed_form(m, n).unwrap();
            let direct = BigUint::from(n - m + 1) * BigUint::from(n + 1).pow(m as u32 - 1);
            ensure(r == c && r == direct, || {
                format!("f({m},{n}) = {r}, closed {c}")
            })?;
            if n <= 5 {
                let e = staircase_count(m as usize, n as usize);
                ensure(r == BigUint::from(e), || {
                    format!("f({m},{n}) = {r}, enumerated {e}")
                })?;
            }
        }
        let diag = f_count(n, n).unwrap();
        ensure(diag == BigUint::from(n + 1).pow(n as u32 - 1), || {
            format!("f({n},{n}) = {diag}")
        })?;
    }
    Ok(())
}

fn c8_hyperl() -> Check {
    for n in 2..=5usize {
        let m = make_mn(n as u64).unwrap();
        let l = minimum_distance_diagram(&m).map_err(|e| e.to_string())?;
        let size = (n as u64 + 1).pow(n as u32 - 1);
        ensure(
            l.len() as u64 == size && l.max_norm == binom(n as u64, 2),
            || format!("n={n}: {} points, max norm {}", l.len(), l.max_norm),
        )?;

        let q = QuotientGroup::new(m).unwrap();
        let class = |x: &[u64]| {
            let v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
            q.canonicalize(&v).unwrap()
        };
        let diagram: std::collections::HashMap<_, u64> = l
            .points
            .iter()
            .map(|p| (class(p), p.iter().sum()))
            .collect();
        ensure(diagram.len() as u64 == size, || {
            format!("n={n}: diagram repeats a class")
        })?;

        let mut seen = HashSet::new();
        let mut members = 0u64;
        let mut x = vec![0u64; n];
        loop {
            if mn_membership(&x, n) {
                members += 1;
                let c = class(&x);
                let norm: u64 = x.iter().sum();
                ensure(diagram.get(&c) == Some(&norm), || {
                    format!(
                        "n={n}: member {x:?} norm {norm} vs diagram {:?}",
                        diagram.get(&c)
                    )
                })?;
                ensure(seen.insert(c), || {
                    format!("n={n}: two members share a class")
                })?;
            }
            let mut i = 0;
            while i < n {
                x[i] += 1;
                if x[i] < n as u64 {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        ensure(members == size, || format!("n={n}: {members} members"))?;
    }
    Ok(())
}

fn c9_degree_two() -> Check {
    timed(Duration::from_secs(120), || {
        let cfg = SearchConfig::default();
        for k in 2..=8u64 {
            let nc = nc_search(2, k, &cfg).map_err(|e| e.to_string())?;
            let na = na_search(2, k, &cfg).map_err(|e| e.to_string())?;
            ensure(nc.exhaustive && na.exhaustive, || {
                format!("k={k}: not exhaustive")
            })?;
            let (fc, fa) = (nc2_formula(k).unwrap(), na2_formula(k).unwrap());
            ensure(nc.best_order == fc && na.best_order == fa, || {
                format!(
                    "k={k}: NC {} vs {fc}, NA {} vs {fa}",
                    nc.best_order, na.best_order
                )
            })?;
        }
        Ok(())
    })
}

fn c10a_table_search() -> Check {
    timed(Duration::from_secs(300), || {
        for (k, want) in [(1u64, 4u64), (2, 9), (3, 16), (4, 27)] {
            let r = nc_search(3, k, &SearchConfig::default()).map_err(|e| e.to_string())?;
            ensure(r.exhaustive && r.best_order == want, || {
                format!("k={k}: best {} exhaustive {}", r.best_order, r.exhaustive)
            })?;
            ensure(r.ceiling <= 3 * (k + 3).pow(3) / 25, || {
                format!("k={k}: ceiling {}", r.ceiling)
            })?;
        }
        Ok(())
    })
}

fn witness_check(gens: &[i64]) -> Check {
    let g = cyclic(84, gens);
    ensure(verify_witness(&g, 7), || {
        format!(
            "{gens:?}: diameter {}",
            g.diameter().map(|d| d.to_string()).unwrap_or_default()
        )
    })?;
    let p = g.distance_profile().unwrap();
    let dens = abelcay::cayley::density(&g, &p).unwrap();
    let want = BigRational::new(84.into(), 1000.into());
    ensure(dens == want, || format!("{gens:?}: density {dens}"))
}

fn c10b_published_witness() -> Check {
    witness_check(&[2, 9, 25])
}

fn c10c_corrected_witness() -> Check {
    witness_check(&[2, 9, 35])
}

fn c11_coefficient() -> Check {
    for d in 2..=8u64 {
        let r = bounds_report(d, 10).map_err(|e| e.to_string())?;
        let want = BigRational::new(BigInt::from(2).pow(d as u32), BigInt::from(d + 1));
        ensure(r.family_coefficient == want, || {
            format!("d={d}: {}", r.family_coefficient)
        })?;
        ensure(r.existence_coefficient.contains("c/sqrt(2*pi)"), || {
            format!("d={d}: existence factor {}", r.existence_coefficient)
        })?;
        let text = r.to_string();
        ensure(text.contains("2^(d-log2(d+1))"), || {
            format!("d={d}: report text")
        })?;
    }
    let r3 = bounds_report(3, 7).unwrap();
    ensure(
        r3.family_coefficient == BigRational::from_integer(2.into()),
        || format!("d=3: {}", r3.family_coefficient),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "1",
            "Smith form of circ(n,-1,..,-1), n=2..8",
            c1_snf_structure,
        ),
        ("2", "det M_n = (n+1)^(n-1), n=2..10", c2_determinant),
        (
            "3",
            "diameter of M_n and D_n is C(n,2), n=2..5",
            c3_base_diameter,
        ),
        (
            "4",
            "n! vertices at maximum distance, n=2..5",
            c4_max_distance_count,
        ),
        (
            "5",
            "D_{n,m} order and diameter, n=2..4, m=1..4",
            c5_scaled_family,
        ),
        ("6", "D_{d,m} density (2/d)^d/(d+1), d=2..6", c6_density),
        (
            "7",
            "f(m,n) recurrence, closed form, enumeration",
            c7_counting,
        ),
        (
            "8",
            "hyper-L of M_n matches membership set, n=2..5",
            c8_hyperl,
        ),
        (
            "9",
            "degree-2 search matches NC/NA formulas, k=2..8",
            c9_degree_two,
        ),
        (
            "10a",
            "NC_{3,k} = 4, 9, 16, 27 for k=1..4",
            c10a_table_search,
        ),
        (
            "10b",
            "Cay(Z_84,{2,9,25}) diameter 7, density 84/1000",
            c10b_published_witness,
        ),
        (
            "10c",
            "Cay(Z_84,{2,9,35}) diameter 7, density 84/1000",
            c10c_corrected_witness,
        ),
        (
            "11",
            "family coefficient 2^d/(d+1), d=3 gives 2",
            c11_coefficient,
        ),
    ];

    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let red = EXPECTED_RED.iter().find(|(r, _)| *r == id);
        match (check(), red) {
            (Ok(()), None) => println!("PASS  criterion {id}: {name}"),
            (Err(e), Some((_, why))) => {
                println!("FAIL  criterion {id}: {name}: {e} (expected: {why})")
            }
            (Err(e), None) => {
                println!("FAIL  criterion {id}: {name}: {e}");
                unexpected.push(id);
            }
            (Ok(()), Some(_)) => {
                println!("PASS  criterion {id}: {name} (listed as expected failure)");
                unexpected.push(id);
            }
        }
    }
    assert!(
        unexpected.is_empty(),
        "unexpected outcome for criteria {unexpected:?}"
    );
}
