use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use hilbert_order::oracle::{check_walk, ENUMERATION_LIMIT_BITS};
use hilbert_order::store::{self, CacheOutcome};
use hilbert_order::{
    enumerate_recursive, run_counter_benchmark, validate_gene_table, Coordinate, CurveParams,
    Decoder, Encoder, GeneCache, GeneTable, HilbertIndex,
};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::points::{Format, PointFile};
use crate::{
    BenchArgs, Cli, Command, DecodeArgs, EncodeArgs, FileFormat, GeneArgs, SortArgs,
    ValidateArgs, CACHE_ENV,
};

/// Runs one invocation, writing results to `out` and warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let tables = Tables {
        cache: if cli.no_cache {
            None
        } else {
            resolve_cache_dir(cli.cache_dir).map(GeneCache::new)
        },
    };
    match cli.command {
        Command::Encode(args) => encode(&tables, args, out, err),
        Command::Decode(args) => decode(&tables, args, out, err),
        Command::Sort(args) => sort(&tables, args, out, err),
        Command::Gene(args) => gene(&tables, args, out, err),
        Command::Validate(args) => validate(&tables, args, out, err),
        Command::Bench(args) => bench(&tables, args, out, err),
    }
}

/// `--cache-dir`, then `$HILBERT_CACHE_DIR`, then the platform cache dir.
pub fn resolve_cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| dirs::cache_dir().map(|d| d.join("hilbert-order")))
}

struct Tables {
    cache: Option<GeneCache>,
}

impl Tables {
    fn get(&self, n: u32, rebuild: bool, err: &mut dyn Write) -> Result<GeneTable> {
        let Some(cache) = &self.cache else {
            return Ok(GeneTable::new(n)?);
        };
        if rebuild {
            let table = GeneTable::new(n)?;
            if let Err(e) = cache.store(&table) {
                writeln!(err, "warning: could not write gene cache: {e}")?;
            }
            return Ok(table);
        }
        match cache.load_or_build(n) {
            Ok((table, CacheOutcome::Rebuilt(why))) => {
                writeln!(
                    err,
                    "warning: regenerated corrupt gene cache {}: {why}",
                    cache.path_for(n).display()
                )?;
                Ok(table)
            }
            Ok((table, _)) => Ok(table),
            Err(hilbert_order::Error::Io(e)) => {
                writeln!(err, "warning: gene cache unavailable ({e}); building in memory")?;
                Ok(GeneTable::new(n)?)
            }
            Err(e) => Err(e.into()),
        }
    }
}

fn params(dim: u32, level: u32) -> Result<CurveParams> {
    Ok(CurveParams::new(dim, level)?)
}

fn split_values(raw: &[String]) -> impl Iterator<Item = &str> {
    raw.iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
}

fn render_index(idx: &HilbertIndex, digits: bool) -> String {
    if digits {
        idx.to_digit_string()
    } else {
        idx.to_string()
    }
}

fn render_point(p: &Coordinate) -> String {
    p.to_tuple()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn encode(tables: &Tables, args: EncodeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = params(args.curve.dim, args.curve.level)?;
    let n = p.dim() as usize;
    let encoder = Encoder::from_number(args.algo).ok_or_else(|| anyhow!("unknown encoder {}", args.algo))?;

    let mut points: Vec<(String, Vec<u64>)> = Vec::new();
    if let Some(path) = &args.input {
        let file = read_points(path, Some(n))?;
        points.extend(file.records.into_iter().map(|r| (format!("{}: {}", path.display(), r.at), r.tuple)));
    }
    let values = split_values(&args.coords)
        .map(|t| t.parse::<u64>().map_err(|_| anyhow!("cannot parse coordinate {t:?}")))
        .collect::<Result<Vec<_>>>()?;
    if values.len() % n != 0 {
        bail!("{} coordinate values given, not a multiple of the dimension {n}", values.len());
    }
    points.extend(values.chunks(n).enumerate().map(|(i, c)| (format!("argument point {}", i + 1), c.to_vec())));
    if points.is_empty() {
        bail!("no points given");
    }

    let genes = tables.get(p.dim(), false, err)?;
    for (origin, tuple) in points {
        let coord = Coordinate::from_tuple(&tuple);
        let (idx, _) = encoder
            .encode(&coord, p, &genes)
            .with_context(|| origin.to_string())?;
        writeln!(out, "{}", render_index(&idx, args.digits))?;
    }
    Ok(())
}

fn decode(tables: &Tables, args: DecodeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = params(args.curve.dim, args.curve.level)?;
    let decoder: Decoder = args.algo.to_string().parse()?;
    let mut inputs: Vec<(String, String)> = Vec::new();
    if let Some(path) = &args.input {
        let reader = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let body = line.trim();
            if !body.is_empty() && !body.starts_with('#') {
                inputs.push((format!("{}: line {}", path.display(), i + 1), body.to_string()));
            }
        }
    }
    inputs.extend(args.indices.iter().map(|s| (format!("index {s:?}"), s.clone())));
    if inputs.is_empty() {
        bail!("no indices given");
    }
    let genes = tables.get(p.dim(), false, err)?;
    for (origin, text) in inputs {
        let idx = HilbertIndex::parse(&text, p).with_context(|| origin.clone())?;
        let (coord, _) = decoder.decode(&idx, p, &genes).with_context(|| origin.clone())?;
        writeln!(out, "{}", render_point(&coord))?;
    }
    Ok(())
}

fn read_points(path: &Path, dim: Option<usize>) -> Result<PointFile> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    PointFile::read(BufReader::new(file), dim).with_context(|| format!("reading {}", path.display()))
}

fn sort(tables: &Tables, args: SortArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = params(args.curve.dim, args.curve.level)?;
    let encoder = Encoder::from_number(args.algo).ok_or_else(|| anyhow!("unknown encoder {}", args.algo))?;
    let mut file = read_points(&args.input, Some(p.dim() as usize))?;
    file.check_level(p.level())
        .with_context(|| format!("reading {}", args.input.display()))?;
    let genes = tables.get(p.dim(), false, err)?;

    let keys = file
        .records
        .par_iter()
        .map(|r| encoder.encode(&Coordinate::from_tuple(&r.tuple), p, &genes).map(|(idx, _)| idx))
        .collect::<Result<Vec<_>, _>>()?;
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut slots: Vec<_> = file.records.drain(..).map(Some).collect();
    file.records = order.into_iter().map(|i| slots[i].take().expect("permutation")).collect();

    let format = match args.output_format {
        Some(FileFormat::Text) => Format::Text,
        Some(FileFormat::Binary) => Format::Binary,
        None => file.format,
    };
    if args.output.as_os_str() == "-" {
        file.write(&mut *out, format)?;
    } else {
        let sink = File::create(&args.output).with_context(|| format!("creating {}", args.output.display()))?;
        file.write(BufWriter::new(sink), format)?;
    }
    Ok(())
}

fn gene(tables: &Tables, args: GeneArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let genes = tables.get(args.dim, args.rebuild, err)?;
    if let Some(path) = &args.output {
        fs::write(path, store::to_bytes(&genes)).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.dump_text {
        write!(out, "{}", genes.to_text())?;
        return Ok(());
    }
    let report = validate_gene_table(&genes);
    writeln!(out, "dimension {} with {} quadrants", genes.dim(), genes.entries().len())?;
    if let Some(cache) = &tables.cache {
        writeln!(out, "cache {}", cache.path_for(genes.dim()).display())?;
    }
    write!(out, "{report}")?;
    if !report.passed() {
        bail!("gene table failed validation");
    }
    Ok(())
}

struct Finding {
    check: &'static str,
    level: Option<u32>,
    passed: bool,
    detail: String,
}

fn validate(tables: &Tables, args: ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if args.min_level > args.max_level {
        bail!("--min-level {} exceeds --max-level {}", args.min_level, args.max_level);
    }
    let genes = tables.get(args.dim, false, err)?;
    let mut findings = Vec::new();
    for c in validate_gene_table(&genes).checks {
        findings.push(Finding {
            check: c.name,
            level: None,
            passed: c.passed,
            detail: c.detail,
        });
    }
    for level in args.min_level..=args.max_level {
        let p = params(args.dim, level)?;
        let (check, outcome) = if p.index_bits() <= args.exhaustive_bits.min(ENUMERATION_LIMIT_BITS) {
            ("exhaustive", exhaustive_level(p, &genes))
        } else {
            ("sampled", sampled_level(p, &genes, args.samples))
        };
        let (passed, detail) = match outcome {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        findings.push(Finding {
            check,
            level: Some(level),
            passed,
            detail,
        });
    }
    for f in &findings {
        let level = f.level.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
        if args.records {
            writeln!(
                out,
                "check={} dim={} level={level} passed={} detail={:?}",
                f.check, args.dim, f.passed, f.detail
            )?;
        } else {
            let tag = if f.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} n={} level={level} {}: {}", args.dim, f.check, f.detail)?;
        }
    }
    let failed = findings.iter().filter(|f| !f.passed).count();
    if failed > 0 {
        bail!("{failed} validation check(s) failed");
    }
    Ok(())
}

/// Oracle enumeration against all decoders and encoders, plus walk checks.
fn exhaustive_level(p: CurveParams, genes: &GeneTable) -> Result<String, String> {
    let curve = enumerate_recursive(p, genes).map_err(|e| e.to_string())?;
    check_walk(p, curve.points.iter().cloned().map(Ok))?;
    for (z, point) in curve.points.iter().enumerate() {
        let idx = HilbertIndex::from_u64(z as u64, p).map_err(|e| e.to_string())?;
        for dec in Decoder::ALL {
            let got = dec.decode(&idx, p, genes).map_err(|e| e.to_string())?.0;
            if &got != point {
                return Err(format!("{dec} maps {z} to {got}, oracle has {point}"));
            }
        }
        for enc in Encoder::ALL {
            let got = enc.encode(point, p, genes).map_err(|e| e.to_string())?.0;
            if got != idx {
                return Err(format!("{enc} maps {point} to {got}, oracle has {z}"));
            }
        }
    }
    Ok(format!("{} points match the recursive construction; bijective unit-step walk", curve.points.len()))
}

fn sampled_level(p: CurveParams, genes: &GeneTable, samples: usize) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(u64::from(p.dim()) << 32 | u64::from(p.level()));
    let mask = if p.level() >= 64 { u64::MAX } else { (1 << p.level()) - 1 };
    let mut steps = 0;
    for _ in 0..samples {
        let point = Coordinate::from_slots((0..p.dim()).map(|_| rng.random::<u64>() & mask).collect());
        let idx = Encoder::Arith.encode(&point, p, genes).map_err(|e| e.to_string())?.0;
        for enc in &Encoder::ALL[1..] {
            let got = enc.encode(&point, p, genes).map_err(|e| e.to_string())?.0;
            if got != idx {
                return Err(format!("{enc} disagrees at {point}"));
            }
        }
        for dec in Decoder::ALL {
            let got = dec.decode(&idx, p, genes).map_err(|e| e.to_string())?.0;
            if got != point {
                return Err(format!("{dec} does not invert encoding of {point}"));
            }
        }
        if let Some(next) = next_index(&idx, p) {
            if let Ok((q, _)) = Decoder::Bits.decode(&next, p, genes) {
                if point.manhattan(&q) != Some(1) {
                    return Err(format!("{point} and its successor {q} are not adjacent"));
                }
                steps += 1;
            }
        }
    }
    Ok(format!("{samples} random points agree across algorithms; {steps} successor steps adjacent"))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| anyhow!("cannot parse {what} {s:?}")))
        .collect()
}

fn bench(tables: &Tables, args: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let tuple: Vec<u64> = parse_list(&args.point, "coordinate")?;
    let levels: Vec<u32> = parse_list(&args.levels, "level")?;
    if levels.is_empty() {
        bail!("no levels given");
    }
    let genes = tables.get(tuple.len() as u32, false, err)?;
    let report = run_counter_benchmark(&Coordinate::from_tuple(&tuple), &levels, &genes, args.samples)?;
    if args.records {
        write!(out, "{}", report.to_records())?;
    } else {
        write!(out, "{report}")?;
    }
    if !report.counters_ok() {
        bail!("iteration counters differ from the expected m / k");
    }
    Ok(())
}

/// `idx + 1`, or `None` at the end of the curve.
fn next_index(idx: &HilbertIndex, p: CurveParams) -> Option<HilbertIndex> {
    let top = (1u64 << p.dim()) - 1;
    let mut digits = idx.digits().to_vec();
    for d in digits.iter_mut().rev() {
        if u64::from(*d) == top {
            *d = 0;
        } else {
            *d += 1;
            return HilbertIndex::new(p.dim(), digits).ok();
        }
    }
    None
}
