//! Command-line surface: argument parsing, run reports and exit codes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::degrees::{
    self, arrow_check, big_ramsey_degree, default_budget, lower_bound_coloring,
    small_ramsey_degree, verify_coloring_is_witness, ArrowOptions, ArrowQuery, DegreeError,
};
use crate::devlin::{
    self, build_antichain, count_devlin_types, default_height_cap, devlin_inventory, DevlinError,
    FiniteSubset,
};
use crate::pstruct::{enumerate_extensions, PnError, PnStructure};
use crate::tangent::{tangent_derivative, TangentError, TangentTable};
use crate::tournament::{
    automorphism_count, circular_tournament, dominated_cycle, enumerate_tournaments,
    is_local_order, Tournament, TournamentError,
};
use crate::trees::{
    filter_by_sequence, induced_sequence, ColorConvention, ColoredTree, ColoringSeq, HostTree,
    TreeError,
};

/// Largest size accepted by `enum` and `identity`.
pub const MAX_ENUM_SIZE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Fails = 1,
    Bound = 2,
    Invalid = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Tournament(#[from] TournamentError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Structure(#[from] PnError),
    #[error(transparent)]
    Tangent(#[from] TangentError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Devlin(#[from] DevlinError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("query: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Bound(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Bound(_)
            | CliError::Degree(DegreeError::BudgetExceeded { .. })
            | CliError::Devlin(DevlinError::CapReached { .. })
            | CliError::Tournament(TournamentError::BoundExceeded { .. }) => Exit::Bound,
            _ => Exit::Invalid,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "localorder",
    version,
    about = "Ramsey degrees of local orders and their embedding types"
)]
pub struct Cli {
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the result table as CSV.
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest coloring space searched by `arrow` (default: RAMSEY_BUDGET or 2^24).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Skip the independent cross-checks.
    #[arg(long, global = true)]
    pub no_oracle: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local orders of size n with their small and big degrees.
    Enum { n: usize },
    /// Small Ramsey degree of a tournament.
    Degree { tournament: String },
    /// Big Ramsey degree of a tournament.
    BigDegree { tournament: String },
    /// Two-part orders projecting onto a tournament, one per class.
    Extensions { tournament: String },
    /// Decide an arrow relation given by a JSON query file.
    Arrow { query: PathBuf },
    /// Odd derivatives of tan at 0 up to tan^(2m-1).
    Tangent { max_m: usize },
    /// Count Devlin types of a partitioned order.
    Devlin {
        size: usize,
        n: u8,
        /// Parts of the elements in order, e.g. 121 (default: all in part 1).
        #[arg(long)]
        word: Option<String>,
        /// Largest host height tried.
        #[arg(long)]
        cap: Option<usize>,
        /// List the types, one canonical code per line.
        #[arg(long)]
        inventory: bool,
    },
    /// Strong subtrees of the colored tree with a given level sequence.
    Tree {
        height: usize,
        n: u8,
        /// Colors 0..n, e.g. 0,1,0 or 010.
        sigma: ColoringSeq,
        /// List the subtrees as JSON, one per line.
        #[arg(long)]
        list: bool,
    },
    /// The first points of the antichain realizing the Devlin types.
    Antichain { n: u8, count: usize },
    /// Check that the small degrees of all size-n local orders sum to 2^n.
    Identity { max_n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([self.header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let cell = |c: &String| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        std::iter::once(&self.header)
            .chain(&self.rows)
            .map(|r| r.iter().map(cell).collect::<Vec<_>>().join(",") + "\n")
            .collect()
    }
}

/// What a command produced before rendering.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub table: Table,
    /// Extra lines printed after the table in text mode.
    pub notes: Vec<String>,
    pub exit: Exit,
}

struct Ctx<'a> {
    cli: &'a Cli,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn oracle(&self) -> bool {
        !self.cli.no_oracle
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Resolves a tournament reference: a builtin name (`point`, `arc`,
/// `3-chain`, `3-cycle`, `dominated-cycle`, `chain:N`, `circular:N`), inline
/// rows separated by `/`, or a file in the text format, relative to `base`.
pub fn resolve_tournament(spec: &str, base: &Path) -> Result<Tournament, CliError> {
    let spec = spec.trim();
    let number = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::Invalid(format!("bad size in {spec:?}")))
    };
    match spec {
        "point" => return Ok(Tournament::point()),
        "arc" => return Ok(Tournament::transitive(2)),
        "3-chain" | "chain3" => return Ok(Tournament::transitive(3)),
        "3-cycle" | "cycle3" => return Ok(circular_tournament(1)),
        "dominated-cycle" => return Ok(dominated_cycle()),
        _ => {}
    }
    if let Some(k) = spec.strip_prefix("chain:") {
        return Ok(Tournament::transitive(number(k)?));
    }
    if let Some(k) = spec.strip_prefix("circular:") {
        let k = number(k)?;
        if k == 0 {
            return Err(CliError::Invalid("circular tournaments start at 1".into()));
        }
        return Ok(circular_tournament(k));
    }
    let rows: Vec<&str> = spec.split('/').collect();
    if rows
        .iter()
        .all(|r| !r.is_empty() && r.chars().all(|c| c == '0' || c == '1'))
    {
        return Ok(Tournament::parse(&format!(
            "{}\n{}",
            rows.len(),
            rows.join("\n")
        ))?);
    }
    let path = base.join(spec);
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?;
    Ok(Tournament::parse(&text)?)
}

fn rows_of(t: &Tournament) -> String {
    t.rows().join("/")
}

fn name_of(t: &Tournament) -> &'static str {
    let code = t.canonical_code();
    let known = [
        (Tournament::point(), "point"),
        (Tournament::transitive(2), "arc"),
        (Tournament::transitive(3), "3-chain"),
        (circular_tournament(1), "3-cycle"),
        (dominated_cycle(), "dominated-cycle"),
    ];
    known
        .iter()
        .find(|(k, _)| k.len() == t.len() && k.canonical_code() == code)
        .map_or("", |(_, name)| name)
}

fn cmd_enum(ctx: &mut Ctx, n: usize) -> Result<(Value, Table), CliError> {
    if n == 0 || n > MAX_ENUM_SIZE {
        return Err(CliError::Bound(format!(
            "enum needs 1 <= n <= {MAX_ENUM_SIZE}, got {n}"
        )));
    }
    let mut table = Table::new(&["name", "rows", "aut", "t", "T"]);
    let mut rows = Vec::new();
    let mut sum = 0usize;
    for t in enumerate_tournaments(n)?.into_iter().filter(is_local_order) {
        let small = small_ramsey_degree(&t)?;
        let big = big_ramsey_degree(&t)?;
        let aut = automorphism_count(&t);
        sum += small;
        table.push(vec![
            name_of(&t).into(),
            rows_of(&t),
            aut.to_string(),
            small.to_string(),
            big.to_string(),
        ]);
        rows.push(json!({"name": name_of(&t), "rows": t.rows(), "aut": aut, "t": small, "T": big.to_string()}));
    }
    ctx.check(
        "sum of t equals 2^n",
        sum == 1 << n,
        format!("{sum} vs {}", 1usize << n),
    );
    Ok((json!({"local_orders": rows, "sum_t": sum}), table))
}

fn cmd_degree(ctx: &mut Ctx, spec: &str, big: bool) -> Result<(Value, Table), CliError> {
    let t = resolve_tournament(spec, Path::new("."))?;
    let small = small_ramsey_degree(&t)?;
    ctx.check(
        "formula matches extension count",
        true,
        format!("{small} classes"),
    );
    let mut table = Table::new(&["rows", if big { "T" } else { "t" }]);
    if big {
        let value = big_ramsey_degree(&t)?;
        if ctx.oracle() && t.len() <= 2 {
            let x = PnStructure::new(2, vec![1; t.len()])?;
            let types = count_devlin_types(&x, default_height_cap(&x))?.count;
            let via = BigInt::from(small) * types;
            ctx.check("t times Devlin type count", via == value, format!("{via}"));
        }
        table.push(vec![rows_of(&t), value.to_string()]);
        Ok((
            json!({"rows": t.rows(), "t": small, "T": value.to_string()}),
            table,
        ))
    } else {
        table.push(vec![rows_of(&t), small.to_string()]);
        Ok((json!({"rows": t.rows(), "t": small}), table))
    }
}

fn cmd_extensions(ctx: &mut Ctx, spec: &str) -> Result<(Value, Table), CliError> {
    let t = resolve_tournament(spec, Path::new("."))?;
    let ext = enumerate_extensions(&t);
    let mut table = Table::new(&["word"]);
    for a in &ext.representatives {
        table.push(vec![a.word()]);
    }
    if ctx.oracle() && !ext.is_empty() {
        let formula = small_ramsey_degree(&t)?;
        ctx.check(
            "count matches formula",
            formula == ext.len(),
            format!("{formula}"),
        );
    }
    let words: Vec<String> = ext.representatives.iter().map(PnStructure::word).collect();
    Ok((
        json!({"rows": t.rows(), "count": ext.len(), "words": words}),
        table,
    ))
}

#[derive(Debug, Deserialize)]
struct QueryFile {
    #[serde(rename = "Z")]
    z: String,
    #[serde(rename = "Y")]
    y: String,
    #[serde(rename = "X")]
    x: String,
    k: usize,
    l: usize,
}

fn cmd_arrow(ctx: &mut Ctx, path: &Path) -> Result<(Value, Table, Exit), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: QueryFile = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let q = ArrowQuery {
        z: resolve_tournament(&raw.z, base)?,
        y: resolve_tournament(&raw.y, base)?,
        x: resolve_tournament(&raw.x, base)?,
        k: raw.k,
        l: raw.l,
    };
    let opts = ArrowOptions {
        budget: ctx.cli.budget.unwrap_or_else(default_budget),
        threads: ctx.cli.threads,
        symmetry_pruning: false,
    };
    let out = arrow_check(&q, &opts)?;
    if ctx.oracle() {
        if let Some(c) = &out.counterexample {
            let ok = verify_coloring_is_witness(&q, c)?;
            ctx.check("counterexample verified", ok, "");
        }
        // the extension coloring refutes the arrow whenever it fits in k colors
        if is_local_order(&q.z) && is_local_order(&q.x) && !q.x.is_empty() {
            let ext = enumerate_extensions(&q.z);
            if let Some(a) = ext.representatives.first() {
                let (_, c) = lower_bound_coloring(&q.z, a, &q.x)?;
                if c.values.iter().all(|&v| v < q.k) {
                    let c = degrees::Coloring { k: q.k, ..c };
                    let witness = verify_coloring_is_witness(&q, &c)?;
                    ctx.check(
                        "consistent with the extension coloring",
                        !(witness && out.holds),
                        format!("witness: {witness}"),
                    );
                }
            }
        }
    }
    let mut table = Table::new(&["holds", "decided_by", "x_copies", "y_copies", "examined"]);
    let decided = serde_json::to_value(&out.decided_by)?;
    table.push(vec![
        out.holds.to_string(),
        decided.as_str().unwrap_or("").into(),
        out.x_copies.len().to_string(),
        out.y_copies.to_string(),
        out.colorings_examined.to_string(),
    ]);
    let results = json!({
        "holds": out.holds,
        "decided_by": decided,
        "x_copies": out.x_copies.len(),
        "y_copies": out.y_copies,
        "colorings_examined": out.colorings_examined,
        "counterexample": out.counterexample,
    });
    let exit = if out.holds { Exit::Ok } else { Exit::Fails };
    Ok((results, table, exit))
}

fn cmd_tangent(ctx: &mut Ctx, max_m: usize) -> Result<(Value, Table), CliError> {
    if max_m == 0 {
        return Err(CliError::Invalid("max_m must be at least 1".into()));
    }
    let table_values = TangentTable::new(max_m);
    ctx.check("Bernoulli and zigzag agree", true, format!("m <= {max_m}"));
    let mut table = Table::new(&["m", "order", "value"]);
    let mut values = Vec::new();
    for (m, order, v) in table_values.rows() {
        table.push(vec![m.to_string(), order.to_string(), v.to_string()]);
        values.push(json!({"m": m, "order": order, "value": v.to_string()}));
    }
    Ok((json!({ "values": values }), table))
}

fn cmd_devlin(
    ctx: &mut Ctx,
    size: usize,
    n: u8,
    word: Option<&str>,
    cap: Option<usize>,
    inventory: bool,
) -> Result<(Value, Table, Vec<String>), CliError> {
    let x = match word {
        Some(w) => PnStructure::parse_word(w, Some(n))?,
        None => PnStructure::new(n, vec![1; size])?,
    };
    if x.len() != size {
        return Err(CliError::Invalid(format!(
            "word has {} elements, size is {size}",
            x.len()
        )));
    }
    let cap = cap.unwrap_or_else(|| default_height_cap(&x));
    let count = count_devlin_types(&x, cap)?;
    let expected = tangent_derivative(2 * size - 1)?;
    if ctx.oracle() {
        ctx.check(
            &format!("equals tan^({})(0)", 2 * size - 1),
            BigInt::from(count.count) == expected,
            expected.to_string(),
        );
    }
    let mut table = Table::new(&["height", "count"]);
    for (h, c) in &count.history {
        table.push(vec![h.to_string(), c.to_string()]);
    }
    let codes: Vec<String> = if inventory {
        devlin_inventory(&x, count.height)?
            .iter()
            .map(devlin::EmCode::to_json)
            .collect()
    } else {
        Vec::new()
    };
    let results = json!({
        "word": x.word(),
        "count": count.count,
        "height": count.height,
        "history": count.history,
        "inventory": codes,
    });
    Ok((results, table, codes))
}

fn cmd_tree(
    ctx: &mut Ctx,
    height: usize,
    n: u8,
    sigma: &ColoringSeq,
    list: bool,
) -> Result<(Value, Table, Vec<String>), CliError> {
    if n == 0 {
        return Err(CliError::Invalid("need at least one color".into()));
    }
    let t = ColoredTree::cyclic(height, n, ColorConvention::ZeroBased);
    let found = filter_by_sequence(&t, sigma)?;
    if ctx.oracle() {
        let host = HostTree::from_tree(&t)?;
        let ok = found
            .iter()
            .all(|s| host.is_strong_subtree(s) && induced_sequence(s, &t) == *sigma);
        ctx.check("each result is a strong subtree with this sequence", ok, "");
    }
    let mut table = Table::new(&["height", "colors", "sigma", "subtrees"]);
    table.push(vec![
        height.to_string(),
        n.to_string(),
        sigma.to_string(),
        found.len().to_string(),
    ]);
    let lines: Vec<String> = if list {
        found.iter().map(|s| s.to_json()).collect()
    } else {
        Vec::new()
    };
    let results = json!({"count": found.len(), "subtrees": if list { serde_json::to_value(&found)? } else { Value::Null }});
    Ok((results, table, lines))
}

fn cmd_antichain(ctx: &mut Ctx, n: u8, count: usize) -> Result<(Value, Table), CliError> {
    let model = build_antichain(n, count)?;
    ctx.check("W clauses", true, format!("{count} nodes"));
    if ctx.oracle() {
        let xs = model.points();
        let pairs_ok = (0..xs.len()).all(|i| {
            (i + 1..xs.len())
                .all(|j| devlin::is_devlin_type(&FiniteSubset::new(vec![xs[i], xs[j]])))
        });
        ctx.check("pairs are Devlin", pairs_ok, "");
    }
    let mut table = Table::new(&["address", "w", "x", "color"]);
    let show = |v: &crate::trees::Node| {
        if v.is_root() {
            "-".to_string()
        } else {
            v.to_string()
        }
    };
    for e in &model.entries {
        table.push(vec![
            show(&e.address),
            show(&e.w),
            show(&e.x),
            e.color.to_string(),
        ]);
    }
    Ok((serde_json::to_value(&model)?, table))
}

fn cmd_identity(ctx: &mut Ctx, max_n: usize) -> Result<(Value, Table), CliError> {
    if max_n == 0 || max_n > MAX_ENUM_SIZE {
        return Err(CliError::Bound(format!(
            "identity needs 1 <= n <= {MAX_ENUM_SIZE}, got {max_n}"
        )));
    }
    let mut table = Table::new(&["n", "local_orders", "sum_t", "2^n"]);
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let mut classes = 0;
        let mut sum = 0;
        for t in enumerate_tournaments(n)?.into_iter().filter(is_local_order) {
            classes += 1;
            sum += small_ramsey_degree(&t)?;
        }
        ctx.check(&format!("n = {n}"), sum == 1 << n, format!("{sum}"));
        table.push(vec![
            n.to_string(),
            classes.to_string(),
            sum.to_string(),
            (1usize << n).to_string(),
        ]);
        rows.push(json!({"n": n, "local_orders": classes, "sum_t": sum}));
    }
    Ok((json!({ "rows": rows }), table))
}

fn inputs_of(command: &Command) -> (String, Value) {
    match command {
        Command::Enum { n } => ("enum".into(), json!({ "n": n })),
        Command::Degree { tournament } => ("degree".into(), json!({ "tournament": tournament })),
        Command::BigDegree { tournament } => {
            ("big-degree".into(), json!({ "tournament": tournament }))
        }
        Command::Extensions { tournament } => {
            ("extensions".into(), json!({ "tournament": tournament }))
        }
        Command::Arrow { query } => ("arrow".into(), json!({ "query": query })),
        Command::Tangent { max_m } => ("tangent".into(), json!({ "max_m": max_m })),
        Command::Devlin {
            size, n, word, cap, ..
        } => (
            "devlin".into(),
            json!({"size": size, "n": n, "word": word, "cap": cap}),
        ),
        Command::Tree {
            height, n, sigma, ..
        } => (
            "tree".into(),
            json!({"height": height, "n": n, "sigma": sigma.0}),
        ),
        Command::Antichain { n, count } => ("antichain".into(), json!({"n": n, "count": count})),
        Command::Identity { max_n } => ("identity".into(), json!({ "max_n": max_n })),
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut ctx = Ctx {
        cli,
        checks: Vec::new(),
    };
    let mut exit = Exit::Ok;
    let mut notes = Vec::new();
    let (results, table) = match &cli.command {
        Command::Enum { n } => cmd_enum(&mut ctx, *n)?,
        Command::Degree { tournament } => cmd_degree(&mut ctx, tournament, false)?,
        Command::BigDegree { tournament } => cmd_degree(&mut ctx, tournament, true)?,
        Command::Extensions { tournament } => cmd_extensions(&mut ctx, tournament)?,
        Command::Arrow { query } => {
            let (r, t, e) = cmd_arrow(&mut ctx, query)?;
            exit = e;
            (r, t)
        }
        Command::Tangent { max_m } => cmd_tangent(&mut ctx, *max_m)?,
        Command::Devlin {
            size,
            n,
            word,
            cap,
            inventory,
        } => {
            let (r, t, lines) = cmd_devlin(&mut ctx, *size, *n, word.as_deref(), *cap, *inventory)?;
            notes = lines;
            (r, t)
        }
        Command::Tree {
            height,
            n,
            sigma,
            list,
        } => {
            let (r, t, lines) = cmd_tree(&mut ctx, *height, *n, sigma, *list)?;
            notes = lines;
            (r, t)
        }
        Command::Antichain { n, count } => cmd_antichain(&mut ctx, *n, *count)?,
        Command::Identity { max_n } => cmd_identity(&mut ctx, *max_n)?,
    };
    let (command, inputs) = inputs_of(&cli.command);
    let report = RunReport {
        command,
        inputs,
        results,
        checks: ctx.checks,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if !report.all_passed() {
        exit = Exit::Fails;
    }
    Ok(Outcome {
        report,
        table,
        notes,
        exit,
    })
}

/// Renders an outcome in the format the flags ask for.
pub fn render(cli: &Cli, out: &Outcome) -> String {
    if cli.json {
        return serde_json::to_string_pretty(&out.report).expect("reports serialize") + "\n";
    }
    if cli.csv {
        return out.table.to_csv();
    }
    let mut s = out.table.to_text();
    for line in &out.notes {
        s.push_str(line);
        s.push('\n');
    }
    for c in &out.report.checks {
        let mark = if c.passed { "ok" } else { "FAILED" };
        let _ = write!(s, "check {}: {mark}", c.name);
        if !c.detail.is_empty() {
            let _ = write!(s, " ({})", c.detail);
        }
        s.push('\n');
    }
    s
}

/// Entry point shared by the binary: parses `args`, prints, and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Exit::Invalid as i32
            } else {
                0
            };
        }
    };
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", render(&cli, &out));
            out.exit as i32
        }
        Err(e) => {
            if cli.json {
                let body = json!({"error": e.to_string(), "exit": e.exit() as i32});
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            eprintln!("error: {e}");
            if let CliError::Degree(DegreeError::BudgetExceeded { .. }) = &e {
                eprintln!(
                    "raise --budget or {} to search further",
                    degrees::BUDGET_ENV
                );
            }
            e.exit() as i32
        }
    }
}
