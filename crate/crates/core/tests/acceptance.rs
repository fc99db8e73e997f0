//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nivatk::annihilator::{find_annihilator, search_difference_annihilator, ModCheck};
use nivatk::catalog;
use nivatk::config::{count_patterns, evaluate, Configuration};
use nivatk::decomposition::{decompose, default_halo};
use nivatk::laurent::{annihilates, line_factorization, LaurentPolynomial};
use nivatk::lattice::{IntVector, Lattice};
use nivatk::nivat::{bound_two_directions, corollary_report, nivat_scan, BoundLabel, Verdict};
use nivatk::quadratic::QuadraticReal;
use nivatk::tiling::{prime_periodicity_check, search_periodic_cotiler, verify_cotiler, CotilerCheck};
use nivatk::window::Window;

type Outcome = Result<String, String>;

fn iv(x: &[i64]) -> IntVector {
    IntVector(x.to_vec())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

fn diff_product(vs: &[IntVector]) -> LaurentPolynomial {
    let mut f = LaurentPolynomial::one(vs[0].dim());
    for v in vs {
        f = &f * &LaurentPolynomial::difference(v);
    }
    f
}

/// Sum of the two lines evaluated directly.
fn two_lines_oracle(n: i64, p: &[i64]) -> i64 {
    i64::from(p[1] == 0 && p[2] == 0) + i64::from(p[0] == 0 && p[2] == n)
}

fn c1_two_lines_complexity() -> Outcome {
    let n = 3;
    let c = catalog::two_lines(n).map_err(e)?;
    for p in Window::cube(3, -4, 5).unwrap().points() {
        ensure(evaluate(&c, &p).unwrap() == two_lines_oracle(n, &p.0), || format!("value at {p}"))?;
    }
    let shape = Window::cube(3, 0, n - 1).unwrap();
    let sample = Window::cube(3, -12, 9).unwrap();
    let count = count_patterns(&c, &shape, &sample, None).map_err(e)?;
    // Independent enumeration from the closed form.
    let mut seen = HashSet::new();
    for a in sample.points() {
        let pat: Vec<i64> = shape.points().map(|u| two_lines_oracle(n, &(&a + &u).0)).collect();
        seen.insert(pat);
    }
    let expected = (2 * n * n + 1) as usize;
    ensure(seen.len() == expected, || format!("oracle saw {}", seen.len()))?;
    ensure(count == expected, || format!("count {count} != {expected}"))?;
    Ok(format!("count={count} (2n^2+1 with n=3, |D|=27)"))
}

fn c2_difference_search() -> Outcome {
    let c = catalog::two_lines(3).map_err(e)?;
    let found = search_difference_annihilator(&c, 2, 1, &Window::cube(3, -8, 8).unwrap())
        .map_err(e)?
        .ok_or("no annihilator found")?;
    let got: BTreeSet<IntVector> = found.iter().cloned().collect();
    let want: BTreeSet<IntVector> = [iv(&[1, 0, 0]), iv(&[0, 1, 0])].into_iter().collect();
    ensure(got == want && found.len() == 2, || format!("found {found:?}"))?;
    Ok(format!("vectors={}", found.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")))
}

fn floor_k_sqrt2(k: i64) -> i64 {
    // floor(k*sqrt 2) from the integer square root of 2k^2.
    let s = ((2 * (k as i128) * (k as i128)) as f64).sqrt() as i128;
    let mut r = s;
    while r * r > 2 * (k as i128) * (k as i128) {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= 2 * (k as i128) * (k as i128) {
        r += 1;
    }
    if k >= 0 {
        r as i64
    } else {
        -(r as i64) - 1
    }
}

fn c3_mechanical_annihilated() -> Outcome {
    let c = catalog::mechanical_sum(QuadraticReal::sqrt(2).unwrap());
    let f = diff_product(&[iv(&[1, 0]), iv(&[0, 1]), iv(&[1, -1])]);
    let w = Window::rect(&[200, 200]).unwrap();
    let a = annihilates(&f, &c, &w).map_err(e)?;
    ensure(a.holds(), || format!("annihilation failed: {a}"))?;
    let vals = c.materialize(&w).map_err(e)?;
    for (p, &v) in vals.iter() {
        let want = floor_k_sqrt2(p[0] + p[1]) - floor_k_sqrt2(p[0]) - floor_k_sqrt2(p[1]);
        ensure(v == want, || format!("value at {p}: {v} != {want}"))?;
        ensure(v == 0 || v == 1, || format!("value {v} at {p}"))?;
    }
    // Independent check of fc = 0 on the shrunk window from the closed form.
    let sup: Vec<(IntVector, i64)> = f.integer_terms().unwrap().into_iter().map(|(e, c)| (e, i64::try_from(c).unwrap())).collect();
    for i in 2..198 {
        for j in 2..198 {
            let s: i64 = sup
                .iter()
                .map(|(ex, k)| {
                    let (x, y) = (i - ex[0], j - ex[1]);
                    k * (floor_k_sqrt2(x + y) - floor_k_sqrt2(x) - floor_k_sqrt2(y))
                })
                .sum();
            ensure(s == 0, || format!("oracle fc({i},{j}) = {s}"))?;
        }
    }
    Ok(format!("annihilates={a}, 40000 values in {{0,1}}"))
}

fn c4_prime_tile() -> Outcome {
    let d = catalog::tromino();
    let co = search_periodic_cotiler(&d, 12).map_err(e)?.ok_or("no co-tiler")?;
    let check = verify_cotiler(&d, &co).map_err(e)?;
    ensure(check == CotilerCheck::Valid, || format!("co-tiler check {check}"))?;
    // Cover count of every cell in a window, computed directly.
    let cfg = co.configuration();
    for p in Window::cube(2, -6, 6).unwrap().points() {
        let covered: i64 = d.cells().iter().map(|u| evaluate(&cfg, &(&p - u)).unwrap()).sum();
        ensure(covered == 1, || format!("cell {p} covered {covered} times"))?;
    }
    let pc = prime_periodicity_check(&d, &co, &Window::rect(&[60, 60]).unwrap()).map_err(e)?;
    ensure(pc.periods.len() == 3, || format!("{} periods", pc.periods.len()))?;
    ensure(pc.periods.iter().all(|(_, ok)| *ok), || format!("periods {:?}", pc.periods))?;
    ensure(pc.congruence == ModCheck::Holds, || format!("congruence {:?}", pc.congruence))?;
    Ok(format!(
        "lattice={} periods={}",
        co.lattice.basis().iter().map(|v| v.to_string()).collect::<String>(),
        pc.periods.iter().map(|(v, _)| v.to_string()).collect::<Vec<_>>().join(" ")
    ))
}

fn random_lattice(rng: &mut StdRng, max_period: i64) -> Lattice {
    let a = rng.gen_range(1..=max_period);
    let c = rng.gen_range(1..=max_period);
    let b = rng.gen_range(0..a);
    Lattice::new(2, vec![iv(&[a, 0]), iv(&[b, c])]).unwrap()
}

fn random_periodic(rng: &mut StdRng, max_period: i64, lo: i64, hi: i64) -> Configuration {
    let l = random_lattice(rng, max_period);
    let values: Vec<(IntVector, i64)> = l.residues().unwrap().into_iter().map(|r| (r, rng.gen_range(lo..=hi))).collect();
    Configuration::periodic(l, values).unwrap()
}

fn c5_annihilator_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let sample = Window::rect(&[30, 30]).unwrap();
    let verify = Window::cube(2, -20, 40).unwrap();
    let (mut accepted, mut tried) = (0, 0);
    while accepted < 50 {
        tried += 1;
        ensure(tried < 10_000, || "could not generate 50 instances".into())?;
        let c = random_periodic(&mut rng, 5, -3, 3);
        let (w, h) = (rng.gen_range(1..=3u64), rng.gen_range(1..=3u64));
        let shape = Window::rect(&[w, h]).unwrap();
        let count = count_patterns(&c, &shape, &sample, None).map_err(e)?;
        if count > shape.len() {
            continue;
        }
        accepted += 1;
        let r = find_annihilator(&c, &shape, &sample, &verify)
            .map_err(e)?
            .ok_or_else(|| format!("no certificate for {c:?}"))?;
        ensure(!r.f.is_zero(), || "zero certificate".into())?;
        // Re-verify directly: fc = 0 cellwise.
        let terms = r.f.terms().map(|(e, c)| (e.clone(), c.clone())).collect::<Vec<_>>();
        for p in verify.points() {
            let mut s = BigRational::zero();
            for (ex, k) in &terms {
                s += k * BigRational::from_integer(BigInt::from(evaluate(&c, &(&p - ex)).unwrap()));
            }
            ensure(s.is_zero(), || format!("fc{p} = {s}"))?;
        }
        ensure(annihilates(&r.f, &c, &verify).map_err(e)?.holds(), || "library re-check failed".into())?;
    }
    Ok(format!("50/50 certificates verified ({tried} draws)"))
}

fn c6_decomposition_roundtrip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let core = Window::rect(&[30, 30]).unwrap();
    for case in 0..100 {
        let k = rng.gen_range(1..=3);
        let mut terms = Vec::new();
        let mut vectors = Vec::new();
        for _ in 0..k {
            let l = random_lattice(&mut rng, 5);
            vectors.push(l.basis()[0].clone());
            let values: Vec<(IntVector, i64)> = l.residues().unwrap().into_iter().map(|r| (r, rng.gen_range(-3..=3))).collect();
            terms.push((1, Configuration::periodic(l, values).unwrap()));
        }
        let c = Configuration::sum(2, terms).unwrap();
        let halo = default_halo(&core, &vectors).map_err(e)?;
        let d = decompose(&c, &vectors, &core, &halo).map_err(|x| format!("case {case}: {x:?}"))?;
        ensure(d.residual_check, || format!("case {case}: residual check false"))?;
        // Both invariants, checked directly.
        for p in core.points() {
            let s: BigRational = d.components.iter().map(|comp| comp.get(&p.0).unwrap().clone()).sum();
            let want = BigRational::from_integer(evaluate(&c, &p).unwrap().into());
            ensure(s == want, || format!("case {case}: sum at {p} is {s}, want {want}"))?;
            for (v, comp) in vectors.iter().zip(&d.components) {
                if let Some(y) = comp.get(&(&p + v).0) {
                    ensure(comp.get(&p.0).unwrap() == y, || format!("case {case}: component {v} not periodic at {p}"))?;
                }
            }
        }
    }
    Ok("100/100 decompositions exact".into())
}

type ModPoly = BTreeMap<(i64, i64), i64>;

fn mul_mod(a: &ModPoly, b: &ModPoly, p: i64) -> ModPoly {
    let mut out = ModPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = (ea.0 + eb.0, ea.1 + eb.1);
            let v = out.entry(e).or_insert(0);
            *v = (*v + ca * cb).rem_euclid(p);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn c7_frobenius() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checks = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let terms: Vec<(IntVector, i64)> = (0..n)
            .map(|_| (iv(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]), rng.gen_range(-9..=9)))
            .collect();
        let f = LaurentPolynomial::from_int_terms(2, terms.clone()).map_err(e)?;
        for p in [2u64, 3, 5, 7, 11, 13] {
            let pi = p as i64;
            let mut base = ModPoly::new();
            for (ex, c) in &terms {
                let v = base.entry((ex[0], ex[1])).or_insert(0);
                *v = (*v + c).rem_euclid(pi);
            }
            base.retain(|_, v| *v != 0);
            let mut power: ModPoly = [((0, 0), 1)].into_iter().collect();
            for _ in 0..p {
                power = mul_mod(&power, &base, pi);
            }
            let frob: ModPoly = base.iter().map(|(ex, c)| ((ex.0 * pi, ex.1 * pi), *c)).collect();
            ensure(power == frob, || format!("oracle: f^{p} != f(X^{p}) for {f}"))?;
            let lib_pow = f.pow_mod(p as u32, p).map_err(e)?;
            let lib_frob = f.substitute_power(p).reduce_mod(p).map_err(e)?;
            ensure(lib_pow == lib_frob, || format!("library: f^{p} != f(X^{p}) for {f}"))?;
            let lib_terms: ModPoly = lib_pow
                .integer_terms()
                .unwrap()
                .into_iter()
                .map(|(ex, c)| ((ex[0], ex[1]), i64::try_from(c).unwrap()))
                .collect();
            ensure(lib_terms == power, || format!("library power disagrees with oracle for {f}, p={p}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks}/1200 congruences hold"))
}

fn random_primitive(rng: &mut StdRng) -> IntVector {
    loop {
        let v = iv(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
        if !v.is_zero() && v.is_primitive() {
            return v.canonical_sign();
        }
    }
}

fn nonzero(rng: &mut StdRng, lo: i64, hi: i64) -> i64 {
    loop {
        let k = rng.gen_range(lo..=hi);
        if k != 0 {
            return k;
        }
    }
}

fn c8_line_factorization() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    for case in 0..100 {
        let k = rng.gen_range(1..=3);
        let mut dirs: Vec<IntVector> = Vec::new();
        while dirs.len() < k {
            let v = random_primitive(&mut rng);
            if !dirs.contains(&v) {
                dirs.push(v);
            }
        }
        let mut f = LaurentPolynomial::one(2);
        for v in &dirs {
            let deg = rng.gen_range(1..=2);
            let terms: Vec<(IntVector, i64)> = (0..=deg)
                .map(|t| {
                    let c = if t == 0 || t == deg { nonzero(&mut rng, -4, 4) } else { rng.gen_range(-4..=4) };
                    (v.scale(t), c)
                })
                .collect();
            f = &f * &LaurentPolynomial::from_int_terms(2, terms).unwrap();
        }
        let (a, b, c) = (nonzero(&mut rng, -5, 5), nonzero(&mut rng, -5, 5), nonzero(&mut rng, -5, 5));
        let i = rng.gen_range(2..=3);
        let h = if rng.gen_bool(0.5) {
            [(iv(&[0, 0]), a), (iv(&[i, 0]), b), (iv(&[0, 1]), c)]
        } else {
            [(iv(&[0, 0]), a), (iv(&[1, 0]), b), (iv(&[0, i]), c)]
        };
        f = &f * &LaurentPolynomial::from_int_terms(2, h).unwrap();
        let lf = line_factorization(&f).map_err(e)?;
        let got: BTreeSet<IntVector> = lf.directions().into_iter().collect();
        let want: BTreeSet<IntVector> = dirs.iter().cloned().collect();
        ensure(got == want, || format!("case {case}: {f} gave {got:?}, planted {want:?}"))?;
        ensure(lf.product() == f, || format!("case {case}: reconstruction failed for {f}"))?;
    }
    Ok("100/100 planted directions recovered".into())
}

fn c9_nivat_scan() -> Outcome {
    let c = catalog::mechanical_sum(QuadraticReal::sqrt(2).unwrap());
    let rows = nivat_scan(&c, 2..=8, 2..=8, &Window::rect(&[500, 500]).unwrap()).map_err(e)?;
    ensure(rows.len() == 49, || format!("{} rows", rows.len()))?;
    for r in &rows {
        ensure(r.threshold == r.big_m * r.big_n, || format!("threshold for {}x{}", r.big_m, r.big_n))?;
        ensure(r.verdict == Verdict::ExceedsMN && r.count > r.threshold, || {
            format!("{}x{}: count {} verdict {}", r.big_m, r.big_n, r.count, r.verdict)
        })?;
    }
    Ok("49/49 rows ExceedsMN".into())
}

fn c10_sturmian() -> Outcome {
    let c = catalog::sturmian(QuadraticReal::sqrt(2).unwrap());
    let len = 10_000i64;
    let word: Vec<i64> = (0..len + 16).map(|i| floor_k_sqrt2(i + 1) - floor_k_sqrt2(i)).collect();
    let sample = Window::rect(&[len as u64]).unwrap();
    for n in 1..=15usize {
        let shape = Window::rect(&[n as u64]).unwrap();
        let oracle: HashSet<&[i64]> = (0..len as usize).map(|i| &word[i..i + n]).collect();
        let count = count_patterns(&c, &shape, &sample, None).map_err(e)?;
        ensure(oracle.len() == n + 1, || format!("oracle count {} for n={n}", oracle.len()))?;
        ensure(count == n + 1, || format!("count {count} for n={n}"))?;
        let r = find_annihilator(&c, &shape, &sample, &sample).map_err(e)?;
        ensure(r.is_none(), || format!("unexpected annihilator for n={n}"))?;
    }
    Ok("complexity n+1 for n=1..15, no annihilator".into())
}

fn c11_bounds() -> Outcome {
    for m in 1..=10u64 {
        for n in 1..=10u64 {
            let b = bound_two_directions(&iv(&[1, 0]), &iv(&[0, 1]), m, n).map_err(e)?;
            ensure(b == BigRational::from_integer((m * n).into()), || format!("({m},{n}) gave {b}"))?;
        }
    }
    let f = diff_product(&[iv(&[1, 0]), iv(&[0, 1]), iv(&[1, -1])]);
    ensure(f.bbox().unwrap() == iv(&[2, 2]), || "bbox".into())?;
    let lf = line_factorization(&f).map_err(e)?;
    ensure(lf.line_direction_count() == 3, || "direction count".into())?;
    let r = corollary_report(&f, &lf, 5, 5).map_err(e)?;
    let a = &r.get(BoundLabel::CorA).ok_or("no cor-a")?.value;
    let c = &r.get(BoundLabel::CorC).ok_or("no cor-c")?.value;
    ensure(*a == BigRational::from_integer(9.into()), || format!("cor-a {a}"))?;
    ensure(*c == BigRational::from_integer(18.into()), || format!("cor-c {c}"))?;
    ensure(!r.get(BoundLabel::CorA).unwrap().conditional, || "cor-a conditional".into())?;
    Ok(format!("two-direction bound = MN on [1,10]^2, cor-a={a}, cor-c={c}"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<u64>);
    let criteria: [Criterion; 11] = [
        ("two-lines complexity", c1_two_lines_complexity, Some(10)),
        ("difference-product search", c2_difference_search, Some(30)),
        ("mechanical sum annihilated", c3_mechanical_annihilated, Some(10)),
        ("prime tile co-tiler", c4_prime_tile, Some(5)),
        ("annihilator soundness", c5_annihilator_soundness, None),
        ("decomposition roundtrip", c6_decomposition_roundtrip, Some(60)),
        ("frobenius congruence", c7_frobenius, None),
        ("line factorization", c8_line_factorization, None),
        ("nivat scan", c9_nivat_scan, Some(120)),
        ("sturmian boundary", c10_sturmian, None),
        ("bound calculators", c11_bounds, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = run();
        let dt = t.elapsed();
        let r = match (r, limit) {
            (Ok(_), Some(s)) if dt > Duration::from_secs(*s) => Err(format!("took {dt:.2?}, limit {s}s")),
            (r, _) => r,
        };
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{dt:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{dt:.2?}] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
