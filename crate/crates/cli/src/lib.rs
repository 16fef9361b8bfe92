//! Command-line front end: solve, compare, gen, grid, bench.
//!
//! Exit codes: 0 ok, 1 solver/oracle mismatch (compare), 2 usage or input
//! errors, 3 internal contract violation.

use dyck_reach::generators;
use dyck_reach::graph::{parse_graph, serialize_graph, BoolMatrix, Label, Ldg, Mode};
use dyck_reach::oracle::{oracle_pm1_reach, oracle_zero_reach};
use dyck_reach::solvers::{cubic_exact_paths, solve};
use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const USAGE: &str = "\
usage: dyck-reach <command> [flags]

commands:
  solve [--mode dyck|semidyck] [--solver matrix|cubic|oracle]
        [--format pairs|json] [--out FILE] GRAPH
  compare GRAPH
  gen <worst-dyck|worst-semidyck> --k K [--out FILE]
  gen flat --heights H1,H2,... [--mode dyck|semidyck] [--out FILE]
  gen random --n N --m M [--seed S] [--out FILE]
  grid --word WORD [--format csv|dot] [--out FILE]
  bench --sizes N1,N2,... [--mode dyck|semidyck] [--out FILE]

graph files: header line \"n m\", then m lines \"src dst label\" with label
token a (open, +1) or A (close, -1); '#' comments and blank lines ignored.
bench sizes must be worst-case Dyck sizes, n = 2^(k+2)-1.
";

/// Entry point shared by the binary and the tests.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(args, stdout, stderr)));
    match outcome {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn dispatch(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let Some(command) = args.first() else {
        let _ = write!(stderr, "{USAGE}");
        return EXIT_USAGE;
    };
    let rest = &args[1..];
    let result = match command.as_str() {
        "solve" => cmd_solve(rest, stdout),
        "compare" => cmd_compare(rest, stdout),
        "gen" => cmd_gen(rest, stdout),
        "grid" => cmd_grid(rest, stdout),
        "bench" => cmd_bench(rest, stdout),
        "help" | "--help" | "-h" => {
            let _ = write!(stdout, "{USAGE}");
            return EXIT_OK;
        }
        // Undocumented: exercises the internal-error path end to end.
        "selftest-panic" => panic!("selftest: deliberate internal failure"),
        other => Err(format!("unknown command {other:?}")),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            let _ = write!(stderr, "{USAGE}");
            EXIT_USAGE
        }
    }
}

struct Flags {
    named: BTreeMap<String, String>,
    positional: Vec<String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags, String> {
        let mut named = BTreeMap::new();
        let mut positional = Vec::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                let value = it
                    .next()
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                named.insert(name.to_string(), value.clone());
            } else {
                positional.push(arg.clone());
            }
        }
        Ok(Flags { named, positional })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.named.get(name).map(String::as_str)
    }

    fn mode(&self) -> Result<Mode, String> {
        match self.get("mode").unwrap_or("dyck") {
            "dyck" => Ok(Mode::Dyck),
            "semidyck" => Ok(Mode::SemiDyck),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

fn read_graph_file(path: &str) -> Result<Ldg, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
    parse_graph(&text).map_err(|e| format!("{path}: {e}"))
}

fn write_output(out_flag: Option<&str>, stdout: &mut dyn Write, content: &str) -> Result<(), String> {
    match out_flag {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("cannot write {path:?}: {e}"))
        }
        None => {
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    }
}

/// Reachability layers produced by one solver on one graph/mode.
#[derive(Debug, Clone)]
pub struct SolverLayers {
    pub solver: &'static str,
    pub neg: BoolMatrix,
    pub zero: BoolMatrix,
    pub pos: BoolMatrix,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
}

pub fn run_solver(g: &Ldg, mode: Mode, solver: &str) -> Result<SolverLayers, String> {
    match solver {
        "matrix" => {
            let r = solve(g, mode);
            Ok(SolverLayers {
                solver: "matrix",
                neg: r.neg,
                zero: r.zero,
                pos: r.pos,
                outer_iterations: r.outer_iterations,
                inner_iterations: r.inner_iterations,
            })
        }
        "cubic" => {
            let t = cubic_exact_paths(g, mode);
            Ok(SolverLayers {
                solver: "cubic",
                neg: t.neg,
                zero: t.zero,
                pos: t.pos,
                outer_iterations: 0,
                inner_iterations: 0,
            })
        }
        "oracle" => Ok(SolverLayers {
            solver: "oracle",
            neg: oracle_pm1_reach(g, mode, -1),
            zero: oracle_zero_reach(g, mode),
            pos: oracle_pm1_reach(g, mode, 1),
            outer_iterations: 0,
            inner_iterations: 0,
        }),
        other => Err(format!("unknown solver {other:?}")),
    }
}

/// FNV-1a digest over the three layers, stable across solvers and runs.
pub fn layer_digest(layers: &SolverLayers) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut feed = |byte: u8| {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    };
    let n = layers.neg.n();
    for byte in (n as u64).to_le_bytes() {
        feed(byte);
    }
    for m in [&layers.neg, &layers.zero, &layers.pos] {
        for i in 0..n {
            for j in 0..n {
                feed(m.get(i, j) as u8);
            }
        }
    }
    hash
}

fn pairs_format(layers: &SolverLayers) -> String {
    let n = layers.neg.n();
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            for (m, class) in [(&layers.neg, -1), (&layers.zero, 0), (&layers.pos, 1)] {
                if m.get(i, j) {
                    out.push_str(&format!("{i} {j} {class}\n"));
                }
            }
        }
    }
    out
}

fn matrix_rows(m: &BoolMatrix) -> Vec<Vec<u8>> {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j) as u8).collect())
        .collect()
}

fn json_format(layers: &SolverLayers, mode: Mode) -> String {
    let value = serde_json::json!({
        "n": layers.neg.n(),
        "mode": mode.name(),
        "neg": matrix_rows(&layers.neg),
        "zero": matrix_rows(&layers.zero),
        "pos": matrix_rows(&layers.pos),
    });
    let mut text = serde_json::to_string_pretty(&value).expect("layers serialize");
    text.push('\n');
    text
}

fn cmd_solve(args: &[String], stdout: &mut dyn Write) -> Result<i32, String> {
    let flags = Flags::parse(args)?;
    let [path] = flags.positional.as_slice() else {
        return Err("solve expects exactly one graph file".into());
    };
    let g = read_graph_file(path)?;
    let mode = flags.mode()?;
    let layers = run_solver(&g, mode, flags.get("solver").unwrap_or("matrix"))?;
    let text = match flags.get("format").unwrap_or("pairs") {
        "pairs" => pairs_format(&layers),
        "json" => json_format(&layers, mode),
        other => return Err(format!("unknown format {other:?}")),
    };
    write_output(flags.get("out"), stdout, &text)?;
    Ok(EXIT_OK)
}

/// First cell where two of the given solver results disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub left: &'static str,
    pub right: &'static str,
    pub layer: &'static str,
    pub cell: (usize, usize),
    pub left_value: bool,
    pub right_value: bool,
}

pub fn first_disagreement(results: &[SolverLayers]) -> Option<Mismatch> {
    let reference = results.first()?;
    for other in &results[1..] {
        for (layer, a, b) in [
            ("neg", &reference.neg, &other.neg),
            ("zero", &reference.zero, &other.zero),
            ("pos", &reference.pos, &other.pos),
        ] {
            if let Some(cell) = a.first_difference(b) {
                return Some(Mismatch {
                    left: reference.solver,
                    right: other.solver,
                    layer,
                    cell,
                    left_value: a.get(cell.0, cell.1),
                    right_value: b.get(cell.0, cell.1),
                });
            }
        }
    }
    None
}

fn cmd_compare(args: &[String], stdout: &mut dyn Write) -> Result<i32, String> {
    let flags = Flags::parse(args)?;
    let [path] = flags.positional.as_slice() else {
        return Err("compare expects exactly one graph file".into());
    };
    let g = read_graph_file(path)?;
    for mode in Mode::BOTH {
        let results = [
            run_solver(&g, mode, "matrix")?,
            run_solver(&g, mode, "cubic")?,
            run_solver(&g, mode, "oracle")?,
        ];
        if let Some(m) = first_disagreement(&results) {
            let _ = writeln!(
                stdout,
                "mismatch: mode={} layer={} cell=({}, {}) {}={} {}={}",
                mode.name(),
                m.layer,
                m.cell.0,
                m.cell.1,
                m.left,
                m.left_value,
                m.right,
                m.right_value
            );
            return Ok(EXIT_MISMATCH);
        }
        let _ = writeln!(
            stdout,
            "agree: mode={} solvers=matrix,cubic,oracle digest={:016x}",
            mode.name(),
            layer_digest(&results[0])
        );
    }
    Ok(EXIT_OK)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| format!("bad {what} entry {part:?}"))
        })
        .collect()
}

fn cmd_gen(args: &[String], stdout: &mut dyn Write) -> Result<i32, String> {
    let flags = Flags::parse(args)?;
    let [family] = flags.positional.as_slice() else {
        return Err("gen expects a family: worst-dyck, worst-semidyck, flat, random".into());
    };
    let graph = match family.as_str() {
        "worst-dyck" | "worst-semidyck" => {
            let k: u32 = flags
                .get("k")
                .ok_or("gen worst-* needs --k")?
                .parse()
                .map_err(|_| "bad --k value".to_string())?;
            if k < 1 {
                return Err("--k must be at least 1".into());
            }
            if family == "worst-dyck" {
                generators::gen_worst_case_dyck(k)
            } else {
                generators::gen_worst_case_semidyck(k)
            }
        }
        "flat" => {
            let heights: Vec<i64> =
                parse_list(flags.get("heights").ok_or("gen flat needs --heights")?, "height")?;
            let mode = flags.mode()?;
            if heights.is_empty() || heights.contains(&0) {
                return Err("--heights must be nonzero integers".into());
            }
            if mode == Mode::Dyck && heights.iter().any(|&h| h < 0) {
                return Err("negative heights (valleys) need --mode semidyck".into());
            }
            generators::gen_flat(&heights, mode)
        }
        "random" => {
            let n: usize = flags
                .get("n")
                .ok_or("gen random needs --n")?
                .parse()
                .map_err(|_| "bad --n value".to_string())?;
            let m: usize = flags
                .get("m")
                .ok_or("gen random needs --m")?
                .parse()
                .map_err(|_| "bad --m value".to_string())?;
            let seed: u64 = flags
                .get("seed")
                .unwrap_or("0")
                .parse()
                .map_err(|_| "bad --seed value".to_string())?;
            if n < 1 {
                return Err("--n must be at least 1".into());
            }
            generators::gen_random(n, m, seed)
        }
        other => return Err(format!("unknown family {other:?}")),
    };
    write_output(flags.get("out"), stdout, &serialize_graph(&graph))?;
    Ok(EXIT_OK)
}

fn cmd_grid(args: &[String], stdout: &mut dyn Write) -> Result<i32, String> {
    let flags = Flags::parse(args)?;
    let word_text = flags.get("word").ok_or("grid needs --word")?;
    let mut word = Vec::new();
    for ch in word_text.chars() {
        match ch {
            'a' => word.push(Label::Open),
            'A' => word.push(Label::Close),
            other => return Err(format!("bad word letter {other:?}, expected a or A")),
        }
    }
    let grid = generators::to_grid(&word);
    let text = match flags.get("format").unwrap_or("csv") {
        "csv" => grid.to_csv(),
        "dot" => grid.to_dot(),
        other => return Err(format!("unknown format {other:?}")),
    };
    write_output(flags.get("out"), stdout, &text)?;
    Ok(EXIT_OK)
}

/// One benchmark row: one solver on one input.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub input: String,
    pub mode: Mode,
    pub solver: &'static str,
    pub n: usize,
    pub m: usize,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub wall_ms: f64,
    pub digest: u64,
}

pub const BENCH_CSV_HEADER: &str =
    "input,mode,solver,n,m,outer_iterations,inner_iterations,wall_ms,digest";

impl RunReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3},{:016x}",
            self.input,
            self.mode.name(),
            self.solver,
            self.n,
            self.m,
            self.outer_iterations,
            self.inner_iterations,
            self.wall_ms,
            self.digest
        )
    }
}

fn worst_dyck_k_for_size(n: usize) -> Option<u32> {
    // n = 2^(k+2) - 1 for some k >= 1.
    let mut k = 1u32;
    loop {
        let size = (1usize << (k + 2)) - 1;
        if size == n {
            return Some(k);
        }
        if size > n {
            return None;
        }
        k += 1;
    }
}

/// Times cubic against the matrix pipeline on the worst-case Dyck family
/// at the given sizes. Rows come out grouped by solver, ascending n.
pub fn bench_table(sizes: &[usize], mode: Mode) -> Result<Vec<RunReport>, String> {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let mut rows = Vec::new();
    for solver in ["cubic", "matrix"] {
        for &n in &sorted {
            let k = worst_dyck_k_for_size(n)
                .ok_or_else(|| format!("size {n} is not of the form 2^(k+2)-1"))?;
            let g = generators::gen_worst_case_dyck(k);
            let start = Instant::now();
            let layers = run_solver(&g, mode, solver)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(RunReport {
                input: format!("worst-dyck-k{k}"),
                mode,
                solver: layers.solver,
                n: g.n(),
                m: g.edge_count(),
                outer_iterations: layers.outer_iterations,
                inner_iterations: layers.inner_iterations,
                wall_ms,
                digest: layer_digest(&layers),
            });
        }
    }
    Ok(rows)
}

fn cmd_bench(args: &[String], stdout: &mut dyn Write) -> Result<i32, String> {
    let flags = Flags::parse(args)?;
    let sizes: Vec<usize> =
        parse_list(flags.get("sizes").ok_or("bench needs --sizes")?, "size")?;
    if sizes.is_empty() {
        return Err("--sizes must list at least one size".into());
    }
    let mode = flags.mode()?;
    let rows = bench_table(&sizes, mode)?;
    let mut text = String::from(BENCH_CSV_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.csv_row());
        text.push('\n');
    }
    write_output(flags.get("out"), stdout, &text)?;
    Ok(EXIT_OK)
}
