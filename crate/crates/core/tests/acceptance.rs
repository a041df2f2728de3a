//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use hilbert_order::encode::encode_step_arith;
use hilbert_order::oracle::{check_walk, Routine};
use hilbert_order::{
    enumerate_recursive, gray, load_table, reflect, run_counter_benchmark, save_table,
    fused2d_update, vec_of_scalar, vec_to_scalar, BitVec, Coordinate, CurveParams, Decoder,
    Encoder, GeneTable, HilbertIndex,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

const GRID: [(u32, u32); 9] = [
    (2, 1), (2, 2), (2, 3),
    (3, 1), (3, 2), (3, 3),
    (4, 1), (4, 2), (4, 3),
];

fn ranges_with_deep_2d() -> Vec<(u32, u32)> {
    let mut r = GRID.to_vec();
    r.extend((4..=8).map(|m| (2, m)));
    r
}

fn params(n: u32, m: u32) -> CurveParams {
    CurveParams::new(n, m).unwrap()
}

fn points(p: CurveParams) -> impl Iterator<Item = Coordinate> {
    let n = p.dim();
    let m = p.level();
    (0..1u64 << p.index_bits()).map(move |cell| {
        Coordinate::from_slots((0..n).map(|i| (cell >> (i * m)) & ((1 << m) - 1)).collect())
    })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cell_maps() -> Outcome {
    let rows: [([u64; 2], u32); 4] = [([0, 0], 0), ([0, 1], 1), ([1, 1], 2), ([1, 0], 3)];
    for (tuple, j) in rows {
        let a = BitVec::from_tuple(&tuple).unwrap();
        ensure(vec_to_scalar(&a) == j, || format!("f_2{tuple:?} != {j}"))?;
        let b = vec_of_scalar(u64::from(j), 2).unwrap();
        ensure(b == a, || format!("b_2({j}) = {b}, expected {a}"))?;
    }
    Ok("8/8 entries".into())
}

fn gene_rows() -> Outcome {
    let g = GeneTable::new(2).map_err(|e| e.to_string())?;
    let expected = [([1, 1], [0, 0]), ([0, 0], [0, 0]), ([0, 0], [0, 0]), ([1, 1], [1, 1])];
    for (q, (ex, rev)) in expected.iter().enumerate() {
        let e = g.entry(q as u32);
        ensure(e.exchange.to_tuple() == ex, || format!("G^{{{q},0}} = {}", e.exchange))?;
        ensure(e.reverse.to_tuple() == rev, || format!("G^{{{q},1}} = {}", e.reverse))?;
    }
    for n in 2..=8 {
        let g = GeneTable::new(n).map_err(|e| e.to_string())?;
        let e = g.entry(0);
        ensure(
            e.exchange.mask() == (1 << (n - 1)) | 1 && e.reverse.mask() == 0,
            || format!("quadrant 0 of n={n} is ({}, {})", e.exchange, e.reverse),
        )?;
    }
    Ok("8/8 vectors; quadrant 0 property for n = 2..8".into())
}

fn fused_update() -> Outcome {
    let g = GeneTable::new(2).unwrap();
    let mut checked = 0;
    for m in 1..=4 {
        for p in points(params(2, m)) {
            let (x, y) = (p.slots()[1], p.slots()[0]);
            let mut state = p.slots().to_vec();
            let q = encode_step_arith(&mut state, m, &g);
            let fused = fused2d_update(q, x, y, m).map_err(|e| e.to_string())?;
            ensure(fused == (state[1], state[0]), || {
                format!("m={m} ({x}, {y}) quadrant {q}: table {fused:?} vs steps ({}, {})", state[1], state[0])
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} points, 0 mismatches"))
}

fn round_trip() -> Outcome {
    let mut checked = 0u64;
    for (n, m) in ranges_with_deep_2d() {
        let g = GeneTable::new(n).unwrap();
        let p = params(n, m);
        for point in points(p) {
            for enc in Encoder::ALL {
                let (idx, _) = enc.encode(&point, p, &g).unwrap();
                for dec in Decoder::ALL {
                    let back = dec.decode(&idx, p, &g).unwrap().0;
                    ensure(back == point, || format!("n={n} m={m} {enc}/{dec}: {point} -> {back}"))?;
                }
            }
            checked += 1;
        }
        for z in 0..1u64 << p.index_bits() {
            let idx = HilbertIndex::from_u64(z, p).unwrap();
            for dec in Decoder::ALL {
                let point = dec.decode(&idx, p, &g).unwrap().0;
                for enc in Encoder::ALL {
                    let again = enc.encode(&point, p, &g).unwrap().0;
                    ensure(again == idx, || format!("n={n} m={m} {dec}/{enc}: {z} -> {again}"))?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} round trips (each through 16 algorithm pairs), 0 failures"))
}

fn adjacency() -> Outcome {
    let mut steps = 0u64;
    for (n, m) in ranges_with_deep_2d() {
        let g = GeneTable::new(n).unwrap();
        let p = params(n, m);
        for dec in Decoder::ALL {
            let walk = (0..1u64 << p.index_bits()).map(|z| {
                let idx = HilbertIndex::from_u64(z, p).unwrap();
                dec.decode(&idx, p, &g).map(|r| r.0).map_err(|e| e.to_string())
            });
            check_walk(p, walk).map_err(|e| format!("n={n} m={m} {dec}: {e}"))?;
            steps += (1u64 << p.index_bits()) - 1;
        }
    }
    Ok(format!("{steps} consecutive pairs at distance 1"))
}

fn four_way() -> Outcome {
    let mut compared = 0u64;
    for (n, m) in ranges_with_deep_2d() {
        let g = GeneTable::new(n).unwrap();
        let p = params(n, m);
        for point in points(p) {
            let reference = Encoder::Arith.encode(&point, p, &g).unwrap().0;
            for enc in &Encoder::ALL[1..] {
                let got = enc.encode(&point, p, &g).unwrap().0;
                ensure(got == reference, || format!("{enc} differs at {point}"))?;
            }
            let reference = Decoder::Arith.decode(&reference, p, &g).unwrap().0;
            for dec in &Decoder::ALL[1..] {
                let idx = Encoder::Arith.encode(&point, p, &g).unwrap().0;
                let got = dec.decode(&idx, p, &g).unwrap().0;
                ensure(got == reference, || format!("{dec} differs at {point}"))?;
            }
            compared += 1;
        }
    }
    let g = GeneTable::new(3).unwrap();
    let p = params(3, 64);
    let mut rng = StdRng::seed_from_u64(1000);
    for _ in 0..1000 {
        let point = Coordinate::from_slots((0..3).map(|_| rng.random()).collect());
        let reference = Encoder::Arith.encode(&point, p, &g).unwrap().0;
        for enc in &Encoder::ALL[1..] {
            let got = enc.encode(&point, p, &g).unwrap().0;
            ensure(got == reference, || format!("m=64 {enc} differs at {point}"))?;
        }
        for dec in Decoder::ALL {
            let got = dec.decode(&reference, p, &g).unwrap().0;
            ensure(got == point, || format!("m=64 {dec} differs at {}", reference.to_digit_string()))?;
        }
        compared += 1;
    }
    Ok(format!("{compared} points, 0 mismatches"))
}

fn oracle_equivalence() -> Outcome {
    let mut compared = 0;
    for (n, m) in GRID.into_iter().filter(|&(n, _)| n <= 3) {
        let g = GeneTable::new(n).unwrap();
        let p = params(n, m);
        let curve = enumerate_recursive(p, &g).map_err(|e| e.to_string())?;
        for (z, expected) in curve.points.iter().enumerate() {
            let idx = HilbertIndex::from_u64(z as u64, p).unwrap();
            for dec in Decoder::ALL {
                let got = dec.decode(&idx, p, &g).unwrap().0;
                ensure(&got == expected, || format!("n={n} m={m} z={z}: {dec} {got} vs oracle {expected}"))?;
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} indices, 0 mismatches"))
}

fn nesting() -> Outcome {
    let mut checked = 0;
    for (n, m) in GRID.into_iter().filter(|&(_, m)| m >= 2) {
        let g = GeneTable::new(n).unwrap();
        for point in points(params(n, m)) {
            let halved = Coordinate::from_slots(point.slots().iter().map(|c| c / 2).collect());
            let fine = Encoder::Arith.encode(&point, params(n, m), &g).unwrap().0;
            let coarse = Encoder::Arith.encode(&halved, params(n, m - 1), &g).unwrap().0;
            ensure(fine.digits()[..(m - 1) as usize] == *coarse.digits(), || {
                format!("n={n} m={m} {point}: {} vs {}", fine.to_digit_string(), coarse.to_digit_string())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} points, 0 failures"))
}

fn step_counters() -> Outcome {
    let g = GeneTable::new(3).unwrap();
    let point = Coordinate::from_tuple(&[1, 1, 1]);
    let levels = [8, 32, 128, 256];
    let report = run_counter_benchmark(&point, &levels, &g, 31).map_err(|e| e.to_string())?;
    for enc in Encoder::ALL {
        let got = report.iterations(Routine::Encode(enc));
        let want: Vec<u64> = if enc.is_fast() { vec![1; 4] } else { levels.iter().map(|&l| u64::from(l)).collect() };
        ensure(got == want, || format!("{enc}: counters {got:?}, expected {want:?}"))?;
    }
    ensure(report.counters_ok(), || format!("decoder counters off:\n{report}"))?;
    let slow = report.row(Routine::Encode(Encoder::Bits), 256).unwrap().median_ns;
    let fast = report.row(Routine::Encode(Encoder::BitsFast), 256).unwrap().median_ns;
    let note = if fast < slow { "faster" } else { "NOT faster" };
    Ok(format!(
        "O(m) counters 8/32/128/256, O(k) counters 1/1/1/1; info: m=256 O(k) {fast:.1} ns vs O(m) {slow:.1} ns ({note})"
    ))
}

fn worked_examples() -> Outcome {
    let g = GeneTable::new(2).unwrap();
    let p = params(2, 2);
    for (tuple, z) in [([1, 1], 2), ([3, 0], 15), ([2, 1], 13), ([0, 1], 3)] {
        let point = Coordinate::from_tuple(&tuple);
        let encoders: &[Encoder] = if z == 3 { &[Encoder::Arith, Encoder::ArithFast] } else { &Encoder::ALL };
        for enc in encoders {
            let got = enc.encode(&point, p, &g).unwrap().0.to_u64();
            ensure(got == Some(z), || format!("{enc}{tuple:?} = {got:?}, expected {z}"))?;
        }
        let idx = HilbertIndex::from_u64(z, p).unwrap();
        for dec in Decoder::ALL {
            let got = dec.decode(&idx, p, &g).unwrap().0;
            ensure(got == point, || format!("{dec}({z}) = {got}, expected {point}"))?;
        }
    }
    let walk = fused2d_update(3, 3, 0, 2).map_err(|e| e.to_string())?;
    ensure(walk == (1, 0), || format!("quadrant-3 update of (3, 0) gave {walk:?}"))?;
    Ok("(1,1)<->2, (3,0)<->15, (2,1)<->13, (0,1)->3 via algorithms 1 and 3".into())
}

fn property_suite() -> Outcome {
    for n in 1..=10u32 {
        for j in 0..1u32 << n {
            let b = vec_of_scalar(u64::from(j), n).unwrap();
            ensure(b.mask() == gray(j), || format!("recurrence/xor-shift differ at n={n} j={j}"))?;
            ensure(vec_to_scalar(&b) == j, || format!("f(b({j})) != {j} at n={n}"))?;
            let a = BitVec::from_mask(j, n);
            ensure(vec_of_scalar(u64::from(vec_to_scalar(&a)), n).unwrap() == a, || format!("b(f({a})) at n={n}"))?;
            if j + 1 < 1 << n {
                let next = vec_of_scalar(u64::from(j + 1), n).unwrap();
                ensure(b.xor(&next).unwrap().count_ones() == 1, || format!("gray step {j} at n={n}"))?;
            }
        }
    }
    for k in 0..=12 {
        for j in 0..1u64 << k {
            ensure(reflect(reflect(j, k).unwrap(), k).unwrap() == j, || format!("Re_{k} not involutive at {j}"))?;
        }
    }
    for n in 2..=6 {
        let table = GeneTable::new(n).unwrap();
        let mut buf = Vec::new();
        save_table(&table, &mut buf).map_err(|e| e.to_string())?;
        let loaded = load_table(&buf[..]).map_err(|e| e.to_string())?;
        ensure(loaded == table, || format!("cache round trip changed table n={n}"))?;
        buf[9] ^= 0x01;
        ensure(load_table(&buf[..]).is_err(), || format!("edited table n={n} accepted"))?;
    }
    Ok("gray adjacency, parity and recurrence forms agree, f∘b, b∘f (n<=10), reflection involution, table save/load".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("AC1  golden cell maps", cell_maps),
        ("AC2  golden gene table", gene_rows),
        ("AC3  fused 2-D update rule", fused_update),
        ("AC4  round trip", round_trip),
        ("AC5  adjacency", adjacency),
        ("AC6  four-way equivalence", four_way),
        ("AC7  recursive oracle equivalence", oracle_equivalence),
        ("AC8  nesting", nesting),
        ("AC9  iteration counters vs level", step_counters),
        ("AC10 worked examples", worked_examples),
        ("AC11 property suite", property_suite),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run)
            .unwrap_or_else(|_| Err(String::from("panicked")));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
