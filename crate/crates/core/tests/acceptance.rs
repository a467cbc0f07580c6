//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ehrhart_core::count::{
    count_image, count_lattice_points, count_translate, ehrhart_value, CountConfig, Method,
    TranslateCounter,
};
use ehrhart_core::ehrhart::{ehrhart_poly_interpolate, k_etp_integer};
use ehrhart_core::fluctuation::product_identity_expansion;
use ehrhart_core::geometry::translate;
use ehrhart_core::qde::{build_gadget, qde_oracle, real_min_scan, Mode, QdeInstance};
use ehrhart_core::rational::{int, rat};
use ehrhart_core::verify::{verify_sequences, verify_transform, verify_trapezoids};
use ehrhart_core::{Point, Polytope, Rational};

type Outcome = Result<String, String>;

fn instances(beta_max: u64) -> Vec<QdeInstance> {
    let mut v = Vec::new();
    for b in 2..=beta_max {
        for a in 0..b {
            for g in 1..b {
                v.push(QdeInstance::new(a, b, g).unwrap());
            }
        }
    }
    v
}

fn label(i: &QdeInstance) -> String {
    format!("(alpha={}, beta={}, gamma={})", i.alpha, i.beta, i.gamma)
}

fn within(budget: Option<Duration>, elapsed: Duration, r: Outcome) -> Outcome {
    match (r, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
        (r, _) => r,
    }
}

fn c1() -> Outcome {
    let out = verify_trapezoids(24).map_err(|e| e.to_string())?;
    match out.failure {
        None => Ok(format!("{} exact counts over N = 2..24", out.checks)),
        Some(v) => Err(v.to_string()),
    }
}

fn c2() -> Outcome {
    let mut checked = 0;
    for inst in instances(4) {
        let oracle = qde_oracle(&inst);
        for mode in [Mode::Rational, Mode::Integer] {
            let g = build_gadget(&inst, mode).map_err(|e| e.to_string())?;
            let counter = TranslateCounter::for_family(&g.family, CountConfig::default()).unwrap();
            let mut min = i128::MAX;
            for t in 0..g.n as i64 {
                let c = if mode == Mode::Integer && t as u64 % inst.beta == 0 {
                    g.big_l + inst.f(t as u64 / inst.beta, 0)
                } else {
                    counter.count_t(t).map_err(|e| e.to_string())? as i128
                };
                min = min.min(c);
            }
            let want = g.big_l + oracle.min_value;
            if min != want || (min == g.big_l) != oracle.feasible {
                return Err(format!(
                    "{} {}: min {min}, expected {want}, oracle feasible {}",
                    label(&inst),
                    mode.name(),
                    oracle.feasible
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} gadget minima equal L + oracle minimum"))
}

fn c3() -> Outcome {
    let mut checked = 0;
    for inst in instances(4) {
        for (mode, want) in [(Mode::Rational, 60), (Mode::Real, 64)] {
            let g = build_gadget(&inst, mode).map_err(|e| e.to_string())?;
            if g.hull.vertex_count() != want {
                return Err(format!("{} {}: {} vertices", label(&inst), mode.name(), g.hull.vertex_count()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} hulls with 60 (rational) or 64 (real) vertices"))
}

fn c4() -> Outcome {
    let cfg = CountConfig { cell_guard: u128::MAX };
    let mut checked = 0;
    for inst in instances(3) {
        let g = build_gadget(&inst, Mode::Rational).map_err(|e| e.to_string())?;
        for t in 0..g.n as i64 {
            let w = g.family.shift(t);
            let hull = count_image(&g.hull, &Rational::one(), Some(w.coords()), Method::Hull, &cfg)
                .map_err(|e| e.to_string())?;
            let parts: u64 = g
                .hull
                .pieces()
                .ok_or("gadget hull carries no pieces")?
                .iter()
                .map(|pc| count_image(&pc.polytope, &Rational::one(), Some(w.coords()), Method::Auto, &cfg))
                .sum::<Result<u64, _>>()
                .map_err(|e| e.to_string())?;
            if hull != parts {
                return Err(format!("{} t={t}: hull {hull}, pieces {parts}", label(&inst)));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} translates: hull membership equals the piece sum"))
}

fn c5() -> Outcome {
    let mut samples = 0;
    for inst in instances(3) {
        let g = build_gadget(&inst, Mode::Real).map_err(|e| e.to_string())?;
        let step = g.delta.clone().unwrap() / int(8);
        let scan = real_min_scan(&g, &step).map_err(|e| format!("{}: {e}", label(&inst)))?;
        let rational = build_gadget(&inst, Mode::Rational).unwrap();
        let rmin = (0..rational.n as i64)
            .map(|t| count_translate(&rational.family, t).unwrap())
            .min()
            .unwrap();
        if scan.min_count != rmin {
            return Err(format!("{}: grid min {}, rational min {rmin}", label(&inst), scan.min_count));
        }
        samples += scan.samples;
    }
    Ok(format!("{samples} grid samples; R, Z and Y contracts and minima hold"))
}

fn c6() -> Outcome {
    let out = verify_transform(3, 5, 6).map_err(|e| e.to_string())?;
    match out.failure {
        None => Ok(format!("{} dilate values equal translate counts", out.checks)),
        Some(v) => Err(v.to_string()),
    }
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=5usize {
        let e = product_identity_expansion(n).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let g: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
            let h: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
            // Both sides evaluated from scratch here.
            let lhs = BigInt::from(3).pow(n as u32 - 1) * g.iter().map(|&x| BigInt::from(x)).product::<BigInt>()
                + h.iter().map(|&x| BigInt::from(x)).product::<BigInt>();
            let rhs: BigInt = e
                .summands
                .iter()
                .map(|s| {
                    let mut v = s.coefficient.clone();
                    for (j, c) in s.choices.iter().enumerate() {
                        v *= match c.sign() {
                            None => BigInt::from(g[j]),
                            Some(sg) => BigInt::from(g[j] + sg as i64 * h[j]),
                        };
                    }
                    v
                })
                .sum();
            if lhs != rhs {
                return Err(format!("n={n}, g={g:?}, h={h:?}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok("n = 2..5, 100 assignments each".into())
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let seqs: Vec<Vec<u64>> = (0..20)
        .map(|_| {
            let r = rng.gen_range(1..=6);
            (0..r).map(|_| rng.gen_range(0..=10)).collect()
        })
        .collect();
    let out = verify_sequences(&seqs).map_err(|e| e.to_string())?;
    match out.failure {
        None => Ok(format!("20 sequences, {} checks (values, vertex and dimension bounds)", out.checks)),
        Some(v) => Err(v.to_string()),
    }
}

fn delta(k: i64) -> Polytope {
    Polytope::from_points(vec![
        Point::from_ints(&[0, 0, 0]),
        Point::from_ints(&[1, 0, 0]),
        Point::from_ints(&[0, 1, k]),
        Point::from_ints(&[1, -1, k]),
    ])
    .unwrap()
}

fn c9() -> Outcome {
    for k in 1..=6 {
        let d = delta(k);
        let base = count_lattice_points(&d).map_err(|e| e.to_string())?;
        let moved = count_lattice_points(&translate(&d, &Point::new(vec![rat(1, 2), int(0), int(0)])).unwrap())
            .map_err(|e| e.to_string())?;
        if base != 4 || moved != k as u64 + 1 {
            return Err(format!("k={k}: |D|={base}, |D+(1/2,0,0)|={moved}"));
        }
    }
    Ok("|D| = 4 and |D + (1/2,0,0)| = k + 1 for k = 1..6".into())
}

fn c10() -> Outcome {
    let mut fixtures: Vec<(String, Polytope)> = Vec::new();
    for d in 1..=3usize {
        fixtures.push((format!("cube{d}"), Polytope::cuboid(&vec![(int(0), int(1)); d]).unwrap()));
        let mut pts = vec![Point::zero(d)];
        pts.extend((0..d).map(|i| Point::axis(d, i, int(1))));
        fixtures.push((format!("simplex{d}"), Polytope::from_points(pts).unwrap()));
    }
    fixtures.push(("delta2".into(), delta(2)));
    let mut checks = 0;
    for (name, p) in &fixtures {
        let poly = ehrhart_poly_interpolate(p).map_err(|e| format!("{name}: {e}"))?;
        let d = p.dim() as u64;
        let direct: Vec<u64> = (0..=d + 3).map(|t| ehrhart_value(p, t).unwrap()).collect();
        for (t, c) in direct.iter().enumerate() {
            if poly.eval(t as u64) != int(*c) {
                return Err(format!("{name}: polynomial at {t} differs from {c}"));
            }
        }
        for k in 1..=30u64 {
            // brute force: first t with f(t) >= k
            let mut t = 0u64;
            while ehrhart_value(p, t).unwrap() < k {
                t += 1;
            }
            let want = t.checked_sub(1);
            let got = k_etp_integer(p, k).map_err(|e| format!("{name}, k={k}: {e}"))?;
            if got != want {
                return Err(format!("{name}, k={k}: k-ETP {got:?}, brute force {want:?}"));
            }
            checks += 1;
        }
    }
    Ok(format!("{} polynomials match counts to t = d+3; {checks} k-ETP answers match", fixtures.len()))
}

fn main() {
    let criteria: Vec<(&str, Option<u64>, fn() -> Outcome)> = vec![
        ("trapezoid contracts", Some(60), c1),
        ("reduction soundness, rational and integer", Some(300), c2),
        ("hull vertex counts", None, c3),
        ("disjoint-union certification", None, c4),
        ("real-translation behaviour", None, c5),
        ("translation to dilation conversion", None, c6),
        ("product identity", None, c7),
        ("sequence realization", Some(600), c8),
        ("tetrahedron anchors", None, c9),
        ("Ehrhart interpolation and k-ETP", None, c10),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let elapsed = start.elapsed();
        let r = within(budget.map(Duration::from_secs), elapsed, r);
        match r {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({elapsed:.1?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({elapsed:.1?})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
