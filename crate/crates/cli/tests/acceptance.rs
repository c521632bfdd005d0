//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::time::{Duration, Instant};

use juxta_core::{
    build_grid, compare_series, complement, count_series, expand, juxtapose, reverse, Builtin,
    Comparison, DecoratedSymbol, Direction, JuxtaRequest, Omega, Series, Side, Specification,
    TrackMode,
};
use juxta_oracle::{
    all_perms, avoids_cell, count_sequence, greedy_unique, juxt_membership, CellSpec,
};
use num_bigint::{BigInt, BigUint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("juxta").chain(args.iter().copied());
    let code = juxta_cli::run(argv, &mut out, &mut err);
    if code == 0 {
        Ok(String::from_utf8(out).unwrap())
    } else {
        Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)))
    }
}

fn expect_equal(label: &str, spec: &Series, other: &Series) -> Result<(), String> {
    match compare_series(spec, other) {
        Comparison::Equal { .. } if spec.len() == other.len() => Ok(()),
        Comparison::Equal { .. } => Err(format!("{label}: lengths differ")),
        Comparison::Mismatch { index, left, right } => Err(format!(
            "{label}: n = {index} gives {left}, expected {right}"
        )),
    }
}

fn oracle_series(cells: &[CellSpec], max_n: usize) -> Result<Series, String> {
    let counts = count_sequence(cells, max_n).map_err(|e| e.to_string())?;
    Ok(Series::from_u64s(&counts))
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(t)
    } else {
        Err(format!("took {t:.2?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("sep_inc.spec");
    let path = path.to_str().unwrap();
    run_cli(&[
        "juxtapose",
        "--builtin",
        "separable",
        "--side",
        "right",
        "--dir",
        "inc",
        "--out",
        path,
    ])?;
    let line = run_cli(&["enumerate", "--spec", path, "--terms", "10"])?;
    let t = within(Duration::from_secs(5), start)?;
    let expected = "1,1,2,6,24,115,609,3409,19728,116692,701062";
    if line.trim() == expected {
        Ok(format!("{expected} in {t:.2?}"))
    } else {
        Err(format!("got {}", line.trim()))
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let spec =
        juxtapose(&Builtin::Av321.spec(), right_inc(TrackMode::Both)).map_err(|e| e.to_string())?;
    let series = count_series(&spec, 9).map_err(|e| e.to_string())?;
    let oracle = oracle_series(&[CellSpec::basis(&["321"]).unwrap(), CellSpec::Inc], 9)?;
    expect_equal("Av(321)|Av(21)", &series, &oracle)?;
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{series} in {t:.2?}"))
}

fn right_inc(track: TrackMode) -> JuxtaRequest {
    JuxtaRequest {
        side: Side::Right,
        direction: Direction::Inc,
        track,
    }
}

/// Coefficients of `num / den` up to `order`, by long division; `den(0) = 1`.
fn divide(num: &[i64], den: &[i64], order: usize) -> Vec<BigInt> {
    assert_eq!(den[0], 1);
    let mut c: Vec<BigInt> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut v = BigInt::from(num.get(n).copied().unwrap_or(0));
        for (k, &d) in den.iter().enumerate().skip(1).take(n) {
            v -= BigInt::from(d) * &c[n - k];
        }
        c.push(v);
    }
    c
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow_product(factors: &[(&[i64], usize)]) -> Vec<i64> {
    let mut out = vec![1];
    for &(f, k) in factors {
        for _ in 0..k {
            out = poly_mul(&out, f);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    const ORDER: usize = 12;
    let one_z: &[i64] = &[1, -1];
    let two_z: &[i64] = &[1, -2];
    let three_z: &[i64] = &[1, -3];
    let parts = [
        divide(&[1], one_z, ORDER),
        divide(
            &[0, 0, 1],
            &poly_pow_product(&[(one_z, 2), (two_z, 1)]),
            ORDER,
        ),
        divide(
            &[0, 0, 0, 1, 1, -4],
            &poly_pow_product(&[(one_z, 3), (two_z, 2), (three_z, 1)]),
            ORDER,
        ),
    ];
    let mut expected = Vec::new();
    for n in 0..=ORDER {
        let v: BigInt = parts.iter().map(|p| &p[n]).sum();
        expected.push(v.to_biguint().ok_or("negative coefficient")?);
    }
    let expected = Series::new(expected);
    let grid = build_grid(&Builtin::Monotone.spec(), &"inc|core|inc".parse().unwrap())
        .map_err(|e| e.to_string())?;
    let series = count_series(&grid, ORDER).map_err(|e| e.to_string())?;
    expect_equal("inc|core|inc", &series, &expected)?;
    Ok(series.to_string())
}

fn criterion_4() -> Outcome {
    let s = Builtin::Av321.spec();
    let out = expand(&s, &[DecoratedSymbol::new("CR", Omega::I)]).map_err(|e| e.to_string())?;
    let got = out.rhs("CR.i").ok_or("CR.i missing")?.to_string();
    let want = "C.i CR.o Z + C.o CR.i Z + C.i Z + C.o ZR Z";
    if got != want {
        return Err(format!("CR.i = {got}"));
    }
    let out = expand(&s, &[DecoratedSymbol::new("C", Omega::OO)]).map_err(|e| e.to_string())?;
    let got = out.rhs("C.oo").ok_or("C.oo missing")?.to_string();
    if got != "E + C.oo C.oo SZ Z" {
        return Err(format!("C.oo = {got}"));
    }
    Ok(format!("CR.i = {want}; C.oo = {got}"))
}

fn criterion_5() -> Outcome {
    let mono = juxtapose(&Builtin::Monotone.spec(), right_inc(TrackMode::Both))
        .map_err(|e| e.to_string())?;
    let mono_class = mono.inline_seq().classify();
    if !mono_class.regular {
        return Err("monotone|Av(21) is not regular after inlining Seq".into());
    }
    let av =
        juxtapose(&Builtin::Av321.spec(), right_inc(TrackMode::Both)).map_err(|e| e.to_string())?;
    if !av.classify().context_free {
        return Err("Av(321)|Av(21) is not context-free".into());
    }
    Ok("monotone|inc regular, av321|inc context-free".into())
}

/// `sum_k a_k C(n-1, k-1)`: the coefficients of `f(z / (1 - z))`.
fn substitute_z_over_one_minus_z(a: &Series) -> Series {
    let n = a.len();
    let mut binom = vec![vec![BigUint::from(0u32); n]; n];
    for i in 0..n {
        binom[i][0] = BigUint::from(1u32);
        for j in 1..=i {
            binom[i][j] = &binom[i - 1][j - 1] + &binom[i - 1][j];
        }
    }
    let mut out = vec![a[0].clone()];
    for m in 1..n {
        let mut v = BigUint::from(0u32);
        for k in 1..=m {
            v += &a[k] * &binom[m - 1][k - 1];
        }
        out.push(v);
    }
    Series::new(out)
}

fn decorated(spec: &Specification, op: Omega) -> Result<Specification, String> {
    expand(spec, &[DecoratedSymbol::new(spec.root(), op)]).map_err(|e| e.to_string())
}

fn criterion_6() -> Outcome {
    const ORDER: usize = 12;
    let mut checks = 0;
    for b in Builtin::ALL {
        let s = b.spec();
        let name = b.name();
        let series = |x: &Specification| count_series(x, ORDER).map_err(|e| e.to_string());
        let base = series(&s)?;
        if complement(&complement(&s)) != s {
            return Err(format!("{name}: complement is not an involution"));
        }
        if reverse(&reverse(&s)) != s {
            return Err(format!("{name}: reverse is not an involution"));
        }
        expect_equal(
            &format!("{name} complement"),
            &series(&complement(&s))?,
            &base,
        )?;
        expect_equal(&format!("{name} reverse"), &series(&reverse(&s))?, &base)?;
        expect_equal(
            &format!("{name}.o"),
            &series(&decorated(&s, Omega::O)?)?,
            &base,
        )?;
        let oo = series(&decorated(&s, Omega::OO)?)?;
        expect_equal(
            &format!("{name}.oo"),
            &oo,
            &substitute_z_over_one_minus_z(&base),
        )?;
        for k in 0..ORDER {
            let short = count_series(&s, k).map_err(|e| e.to_string())?;
            expect_equal(&format!("{name} order {k}"), &short, &base.prefix(k + 1))?;
        }
        checks += 1;
    }
    Ok(format!("{checks} built-ins at order {ORDER}"))
}

fn criterion_7() -> Outcome {
    let cores = [
        ("av321", CellSpec::basis(&["321"]).unwrap()),
        ("separable", CellSpec::basis(&["2413", "3142"]).unwrap()),
    ];
    for (name, core) in &cores {
        for n in 0..=8 {
            if !greedy_unique(core, n).map_err(|e| e.to_string())? {
                return Err(format!("{name}: greedy cut fails at n = {n}"));
            }
        }
    }
    Ok("av321 and separable, n <= 8".into())
}

fn criterion_8() -> Outcome {
    let spec = Builtin::Av321.spec();
    let core = CellSpec::basis(&["321"]).unwrap();
    let mut lines = Vec::new();
    for side in [Side::Right, Side::Left] {
        for direction in [Direction::Inc, Direction::Dec] {
            let req = JuxtaRequest {
                side,
                direction,
                track: TrackMode::Both,
            };
            let out = juxtapose(&spec, req).map_err(|e| e.to_string())?;
            let series = count_series(&out, 8).map_err(|e| e.to_string())?;
            let mono = match direction {
                Direction::Inc => CellSpec::Inc,
                Direction::Dec => CellSpec::Dec,
            };
            let cells = match side {
                Side::Right => vec![core.clone(), mono],
                Side::Left => vec![mono, core.clone()],
            };
            expect_equal(
                &format!("{side} {direction}"),
                &series,
                &oracle_series(&cells, 8)?,
            )?;
            lines.push(format!("{side} {direction}"));
        }
    }
    Ok(lines.join(", "))
}

fn criterion_9() -> Outcome {
    let cells = [CellSpec::basis(&["2413", "3142"]).unwrap(), CellSpec::Inc];
    let basis = CellSpec::basis(&[
        "25143", "35142", "35241", "41532", "42531", "241365", "251364", "314265", "315264",
        "415263",
    ])
    .unwrap();
    for n in 0..=8 {
        let agree = all_perms(n, |p| juxt_membership(p, &cells) == avoids_cell(p, &basis))
            .map_err(|e| e.to_string())?;
        if !agree {
            return Err(format!("membership differs at n = {n}"));
        }
    }
    Ok("every permutation of length <= 8".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("separable juxtaposition sequence", criterion_1),
        ("Av(321)|Av(21) against the oracle", criterion_2),
        ("inc|core|inc grid against f", criterion_3),
        ("expansion goldens", criterion_4),
        ("classification preservation", criterion_5),
        ("symmetry and operator properties", criterion_6),
        ("greedy uniqueness", criterion_7),
        ("four-way symmetry for av321", criterion_8),
        ("separable|Av(21) basis cross-check", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {reason}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
