//! Command line: argument parsing, seed resolution, and one handler per subcommand.
//!
//! Exit codes: 0 success, 1 a verification or model failure, 2 a usage error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cluster::{self, all_cluster_variables, all_seeds, d_vector, exchange_relation, pair_weights, quiver, Seed};
use crate::coxeter::{self, SubwordComplex};
use crate::geometry::{Chord, CsPair, Dn, Side};
use crate::laurent::default_names;
use crate::matching::{self, openings, variable_via_matching_in};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("model inconsistency: {0}")]
    Model(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<cluster::ClusterError> for CliError {
    fn from(e: cluster::ClusterError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<matching::MatchingError> for CliError {
    fn from(e: matching::MatchingError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<coxeter::CoxeterError> for CliError {
    fn from(e: coxeter::CoxeterError) -> Self {
        CliError::Model(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "pseudotri", version, about = "Type D cluster algebras from centrally symmetric pseudotriangulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Rank; read from a seed file when omitted there, otherwise 3.
    #[arg(long)]
    pub n: Option<usize>,
    /// star-left, star-right, central:<p>, zc:<c> or a JSON file.
    #[arg(long, default_value = "star-left")]
    pub seed: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Flip graph of all pseudotriangulations.
    Enumerate(Common),
    /// All n^2 cluster variables from a seed, with d-vectors.
    Variables(Common),
    /// Flip a sequence of pairs, printing each exchange relation.
    Flip {
        #[command(flatten)]
        common: Common,
        /// Chord naming the pair to flip, e.g. 0L, 2R, [1,3]; repeatable.
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
    },
    /// Quiver of a seed.
    Quiver(Common),
    /// Openings and perfect matching sums.
    Matching {
        #[command(flatten)]
        common: Common,
        /// Restrict to one pair, named by a chord.
        #[arg(long)]
        delta: Option<String>,
        /// Opening shown with --format dot.
        #[arg(long)]
        opening: Option<usize>,
    },
    /// The word c w0(c) with its chord labels.
    Subword {
        #[command(flatten)]
        common: Common,
        /// Coxeter element, e.g. 1,2,0; defaults to 0,1,...,n-1.
        #[arg(long)]
        c: Option<String>,
        /// Positions to test as a facet, e.g. 1,7,8.
        #[arg(long)]
        facet: Option<String>,
    },
    /// Run consistency suites.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// HTTP session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Keep sessions in this JSON file across restarts.
        #[arg(long)]
        persist: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Commutation,
    Laurent,
    Templates,
    Matching,
    Subword,
}

/// Parses a Coxeter element written as `1,2,0` or `120`.
pub fn parse_coxeter(text: &str, n: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = if text.contains(',') { text.split(',').collect() } else { text.split("").filter(|s| !s.is_empty()).collect() };
    let c = parts
        .iter()
        .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad Coxeter element {:?}", text))))
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = c.clone();
    sorted.sort();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(CliError::Usage(format!("{:?} is not a permutation of 0..{}", text, n - 1)));
    }
    Ok(c)
}

pub fn parse_pair(dn: &Dn, text: &str) -> Result<CsPair> {
    let chord: Chord = text.parse().map_err(|e| CliError::Usage(format!("{}", e)))?;
    let chord = dn.canonical(chord).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(dn.pair_of(chord))
}

/// A seed named on the command line, or described by JSON: either a serialized
/// pseudotriangulation `{"n", "pairs"}` or `{"chords": [...], "names"?: [...]}`,
/// where the chord order fixes the variable order.
pub fn seed_from_json(dn: &Dn, v: &Value) -> Result<Seed> {
    let usage = |m: &str| CliError::Usage(m.to_string());
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != dn.n() {
            return Err(usage(&format!("seed has n = {} but rank {} was requested", n, dn.n())));
        }
    }
    if let Some(chords) = v.get("chords").and_then(Value::as_array) {
        let pairs = chords
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_pair(dn, s),
                other => serde_json::from_value::<Chord>(other.clone())
                    .map_err(|e| CliError::Usage(e.to_string()))
                    .and_then(|c| dn.canonical(c).map_err(|e| CliError::Usage(e.to_string())))
                    .map(|c| dn.pair_of(c)),
            })
            .collect::<Result<Vec<_>>>()?;
        let t = dn.pseudotriangulation(&pairs).map_err(|e| CliError::Usage(e.to_string()))?;
        let names = match v.get("names") {
            Some(names) => serde_json::from_value::<Vec<String>>(names.clone()).map_err(|e| CliError::Usage(e.to_string()))?,
            None => default_names(dn.n()),
        };
        if names.len() != dn.n() {
            return Err(usage("need one variable name per pair"));
        }
        return Seed::with_assignment(dn, &t, &pairs, names).map_err(|e| CliError::Usage(e.to_string()));
    }
    if let Some(pairs) = v.get("pairs") {
        let pairs: Vec<CsPair> = serde_json::from_value(pairs.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
        let pairs = pairs
            .iter()
            .map(|p| dn.canonical(p.rep).map(|c| dn.pair_of(c)))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let t = dn.pseudotriangulation(&pairs).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok(Seed::initial(dn, &t));
    }
    Err(usage("seed JSON needs \"pairs\" or \"chords\""))
}

/// Resolves `--seed` for rank `dn.n()`.
pub fn resolve_seed(dn: &Dn, spec: &str) -> Result<Seed> {
    let n = dn.n();
    if spec == "star-left" {
        return Ok(Seed::initial(dn, &dn.star(Side::L)));
    }
    if spec == "star-right" {
        return Ok(Seed::initial(dn, &dn.star(Side::R)));
    }
    if let Some(p) = spec.strip_prefix("central:") {
        let p: usize = p.parse().map_err(|_| CliError::Usage(format!("bad vertex in {:?}", spec)))?;
        if p >= 2 * n {
            return Err(CliError::Usage(format!("vertex {} out of range for n = {}", p, n)));
        }
        return Ok(Seed::initial(dn, &dn.central_at(p)));
    }
    if let Some(c) = spec.strip_prefix("zc:") {
        let c = parse_coxeter(c, n)?;
        return Ok(Seed::initial(dn, &coxeter::accordion(dn, &c)?));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("cannot read seed {:?}: {}", spec, e)))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("seed {:?}: {}", spec, e)))?;
    seed_from_json(dn, &v)
}

/// Rank from `--n`, else from a seed file, else 3.
fn rank(common: &Common) -> Result<Dn> {
    let from_file = std::fs::read_to_string(&common.seed)
        .ok()
        .and_then(|t| serde_json::from_str::<Value>(&t).ok())
        .and_then(|v| v.get("n").and_then(Value::as_u64))
        .map(|n| n as usize);
    let n = common.n.or(from_file).unwrap_or(3);
    if n > 12 {
        return Err(CliError::Usage(format!("rank {} is too large for this tool", n)));
    }
    Dn::new(n).map_err(|e| CliError::Usage(e.to_string()))
}

fn jobs(common: &Common) -> usize {
    common.jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)).max(1)
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Usage(format!("{} does not support --format {:?}", cmd, f).to_lowercase())
}

fn emit(common: &Common, body: String, out: &mut dyn Write) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn enumerate(common: &Common) -> Result<String> {
    let dn = rank(common)?;
    let g = dn.enumerate(jobs(common));
    log::info!("{} pseudotriangulations for n = {}", g.nodes.len(), dn.n());
    Ok(match common.format {
        Format::Dot => g.to_dot(),
        Format::Json => pretty(&g.to_json()),
        Format::Text => {
            let mut s = format!("# {} pseudotriangulations of D{}\n", g.nodes.len(), dn.n());
            for (i, t) in g.nodes.iter().enumerate() {
                let nb: Vec<String> = g.edges.iter().filter(|e| e.from == i).map(|e| e.to.to_string()).collect();
                writeln!(s, "{}\t{:?}\t{}\t{}", i, dn.classify(t), crate::geometry::FlipGraph::key(t), nb.join(",")).unwrap();
            }
            s
        }
    })
}

fn variables(common: &Common) -> Result<String> {
    let dn = rank(common)?;
    let s0 = resolve_seed(&dn, &common.seed)?;
    let all = all_cluster_variables(&dn, &s0)?;
    let mut rows = vec![];
    for (p, x) in &all {
        let d = if s0.t.contains(p) { vec![0; dn.n()] } else { d_vector(&dn, &s0, p, x)? };
        rows.push((p, x, d));
    }
    Ok(match common.format {
        Format::Json => pretty(&json!({
            "seed": s0.to_json(),
            "variables": rows.iter().map(|(p, x, d)| json!({
                "pair": p,
                "name": p.to_string(),
                "text": x.to_string_with(&s0.names),
                "fraction": x.to_fraction_string(&s0.names),
                "json": x.to_json(&s0.names),
                "dVector": d,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("# seed {} with variables {}\n", s0.t, s0.names.join(", "));
            for (p, x, d) in &rows {
                let d: Vec<String> = d.iter().map(|v| v.to_string()).collect();
                writeln!(s, "{}\t{}\t({})", p, x.to_fraction_string(&s0.names), d.join(",")).unwrap();
            }
            s
        }
        f => return Err(unsupported("variables", f)),
    })
}

fn flip(common: &Common, pairs: &[String]) -> Result<String> {
    let dn = rank(common)?;
    let mut sd = resolve_seed(&dn, &common.seed)?;
    let mut steps = vec![];
    let mut text = String::new();
    for name in pairs {
        let chi = parse_pair(&dn, name)?;
        if !sd.t.contains(&chi) {
            return Err(CliError::Usage(format!("{} is not in the current pseudotriangulation {}", chi, sd.t)));
        }
        let binomial = sd.exchange_binomial(&chi);
        let rel = exchange_relation(&dn, &sd.t, &chi)?;
        let (next, new) = sd.mutate(&dn, &chi)?;
        let names = &sd.names;
        writeln!(
            text,
            "flip {} -> {}\n  x[{}] * x[{}] = {}\n  x[{}] = {}\n  shape {:?}",
            chi,
            new,
            chi,
            new,
            binomial.to_string_with(names),
            new,
            next.var(&new).to_fraction_string(names),
            rel.shape
        )
        .unwrap();
        steps.push(json!({
            "removed": chi,
            "added": new,
            "binomial": binomial.to_string_with(names),
            "variable": next.var(&new).to_string_with(names),
            "fraction": next.var(&new).to_fraction_string(names),
            "shape": rel.shape,
        }));
        sd = next;
    }
    Ok(match common.format {
        Format::Json => pretty(&json!({"steps": steps, "seed": sd.to_json()})),
        Format::Text => {
            writeln!(text, "now {}", sd.t).unwrap();
            text
        }
        f => return Err(unsupported("flip", f)),
    })
}

fn quiver_cmd(common: &Common) -> Result<String> {
    let dn = rank(common)?;
    let sd = resolve_seed(&dn, &common.seed)?;
    Ok(match common.format {
        Format::Dot => sd.quiver.to_dot(),
        Format::Json => pretty(&sd.quiver.to_json()),
        Format::Text => {
            let mut s = String::new();
            for ((a, b), m) in &sd.quiver.arcs {
                writeln!(s, "{} -> {}{}", a, b, if *m > 1 { format!(" x{}", m) } else { String::new() }).unwrap();
            }
            s
        }
    })
}

fn matching_cmd(common: &Common, delta: &Option<String>, opening: Option<usize>) -> Result<String> {
    let dn = rank(common)?;
    let sd = resolve_seed(&dn, &common.seed)?;
    let ops = openings(&dn, &sd)?;
    let targets: Vec<CsPair> = match delta {
        Some(d) => vec![parse_pair(&dn, d)?],
        None => dn.all_cs_pairs().to_vec(),
    };
    let results = targets.iter().map(|p| variable_via_matching_in(&dn, &ops, p)).collect::<std::result::Result<Vec<_>, _>>()?;
    let names = &sd.names;
    Ok(match common.format {
        Format::Dot => {
            let i = opening.or_else(|| delta.as_ref().map(|_| results[0].opening)).unwrap_or(0);
            let o = ops.get(i).ok_or_else(|| CliError::Usage(format!("no opening {}; there are {}", i, ops.len())))?;
            o.to_dot()
        }
        Format::Json => pretty(&json!({
            "seed": sd.to_json(),
            "openings": ops.iter().map(|o| json!({
                "side": o.side,
                "lo": o.lo,
                "hi": o.hi,
                "sigma": o.sigma,
                "vertices": o.vertices,
                "triangles": o.triangles,
                "weights": o.weights.iter().map(|((a, b), w)| json!({"edge": [a, b], "weight": w.to_string_with(names)})).collect::<Vec<_>>(),
                "diagonals": o.diagonals,
            })).collect::<Vec<_>>(),
            "table": targets.iter().zip(&results).map(|(p, r)| json!({
                "pair": p,
                "name": p.to_string(),
                "opening": r.opening,
                "chord": r.chord,
                "deleted": [r.deleted.0, r.deleted.1],
                "w": r.w.to_string_with(names),
                "m": r.m.to_fraction_string(names),
                "x": r.x.to_fraction_string(names),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("# {} openings of {}\n", ops.len(), sd.t);
            for (i, o) in ops.iter().enumerate() {
                writeln!(s, "# opening {}: side {:?}, window O,{}..{}", i, o.side, o.lo, o.hi).unwrap();
            }
            for (p, r) in targets.iter().zip(&results) {
                writeln!(
                    s,
                    "{}\topening {}\tw = {}\tm = {}\tx = {}",
                    p,
                    r.opening,
                    r.w.to_string_with(names),
                    r.m.to_fraction_string(names),
                    r.x.to_fraction_string(names)
                )
                .unwrap();
            }
            s
        }
    })
}

fn subword(common: &Common, c: &Option<String>, facet: &Option<String>) -> Result<String> {
    let dn = rank(common)?;
    let n = dn.n();
    let c = match c {
        Some(c) => parse_coxeter(c, n)?,
        None => (0..n).collect(),
    };
    let sc = SubwordComplex::new(&dn, &c)?;
    let facet: Option<BTreeSet<usize>> = match facet {
        Some(f) => Some(
            f.split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad position list {:?}", f))))
                .collect::<Result<BTreeSet<_>>>()?,
        ),
        None => None,
    };
    if let Some(f) = &facet {
        if f.iter().any(|&i| i == 0 || i > sc.len()) {
            return Err(CliError::Usage(format!("positions must lie in 1..{}", sc.len())));
        }
    }
    let facet_report = facet.as_ref().map(|f| {
        let ok = sc.is_facet(f);
        let t = if ok { sc.facet_to_pseudotriangulation(&dn, f).ok() } else { None };
        (ok, t)
    });
    Ok(match common.format {
        Format::Json => pretty(&json!({
            "c": c,
            "word": sc.word,
            "rows": (1..=sc.len()).map(|i| json!({
                "position": i,
                "letter": sc.word[i - 1],
                "pair": sc.pairs[i - 1],
                "name": sc.pairs[i - 1].to_string(),
                "rotation": sc.rotation[i - 1],
                "root": sc.root_of(&dn, &sc.pairs[i - 1]),
            })).collect::<Vec<_>>(),
            "facet": facet_report.as_ref().map(|(ok, t)| json!({"isFacet": ok, "pseudotriangulation": t})),
        })),
        Format::Text => {
            let mut s = format!("# c = {:?}\nposition\tletter\tpair\trotation\troot\n", c);
            for i in 1..=sc.len() {
                let p = &sc.pairs[i - 1];
                let partner = p.partner;
                writeln!(s, "{}\t{}\t{{{}, {}}}\t{}\t{:?}", i, sc.word[i - 1], p.rep, partner, sc.rotation[i - 1], sc.root_of(&dn, p)).unwrap();
            }
            if let Some((ok, t)) = facet_report {
                match t {
                    Some(t) if ok => writeln!(s, "facet: yes, {}", t).unwrap(),
                    _ => writeln!(s, "facet: no").unwrap(),
                }
            }
            s
        }
        f => return Err(unsupported("subword", f)),
    })
}

/// One line per check.
pub struct Report {
    pub lines: Vec<(String, bool, String)>,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.lines.push((name.to_string(), ok, detail));
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.1)
    }
}

fn run_check(report: &mut Report, name: &str, f: impl FnOnce() -> std::result::Result<String, String>) {
    match f() {
        Ok(detail) => report.check(name, true, detail),
        Err(detail) => report.check(name, false, detail),
    }
}

/// Consistency suites over every seed reachable from `s0`.
pub fn verify(dn: &Dn, s0: &Seed, suite: Suite) -> Report {
    let mut report = Report { lines: vec![] };
    let want = |s: Suite| suite == Suite::All || suite == s;
    let seeds = match all_seeds(dn, s0) {
        Ok(s) => s,
        Err(e) => {
            report.check("seeds", false, e.to_string());
            return report;
        }
    };
    let n = dn.n();
    if want(Suite::Commutation) {
        run_check(&mut report, "commutation", || {
            let bad: Vec<String> = seeds.par_iter().filter(|s| s.quiver != quiver(dn, &s.t) || !s.quiver.is_simple()).map(|s| s.t.to_string()).collect();
            let star = quiver(dn, &dn.star(Side::L));
            let cycle = star.arcs.len() == n && star.nodes.iter().all(|k| star.in_arcs(k).len() == 1 && star.out_arcs(k).len() == 1);
            if bad.is_empty() && cycle {
                Ok(format!("{} seeds, every flip matches quiver mutation", seeds.len()))
            } else {
                Err(format!("{} quivers disagree; star cycle {}", bad.len(), cycle))
            }
        });
    }
    if want(Suite::Laurent) {
        run_check(&mut report, "laurent", || {
            let all = all_cluster_variables(dn, s0).map_err(|e| e.to_string())?;
            for (p, x) in &all {
                if !x.has_positive_coefficients() {
                    return Err(format!("{} has a negative coefficient", p));
                }
                if !s0.t.contains(p) {
                    d_vector(dn, s0, p, x).map_err(|e| e.to_string())?;
                }
            }
            Ok(format!("{} variables Laurent, positive, d-vectors match crossings", all.len()))
        });
    }
    if want(Suite::Templates) {
        run_check(&mut report, "templates", || {
            let bad: Vec<String> = seeds
                .par_iter()
                .flat_map(|s| {
                    s.t.pairs
                        .iter()
                        .filter_map(|chi| {
                            let ok = (|| -> std::result::Result<bool, String> {
                                let rel = exchange_relation(dn, &s.t, chi).map_err(|e| e.to_string())?;
                                let w = pair_weights(dn, &s.vars, n);
                                let x = rel.solve_added(n, &w).map_err(|e| e.to_string())?;
                                let (s2, new) = s.mutate(dn, chi).map_err(|e| e.to_string())?;
                                Ok(&x == s2.var(&new))
                            })();
                            match ok {
                                Ok(true) => None,
                                Ok(false) => Some(format!("{} in {}", chi, s.t)),
                                Err(e) => Some(e),
                            }
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            if bad.is_empty() {
                Ok(format!("{} flips read off pseudoquadrangles agree with mutation", seeds.len() * n))
            } else {
                Err(bad.join("; "))
            }
        });
    }
    if want(Suite::Matching) {
        run_check(&mut report, "matching", || {
            let truth = all_cluster_variables(dn, s0).map_err(|e| e.to_string())?;
            let truth = &truth;
            let bad: Vec<String> = seeds
                .par_iter()
                .flat_map(|s| {
                    let ops = match openings(dn, s) {
                        Ok(o) => o,
                        Err(e) => return vec![e.to_string()],
                    };
                    let mut bad = vec![];
                    for (p, x) in truth {
                        // the openings are weighted by the seed's own variables, which are
                        // already expressed in the initial ones
                        match variable_via_matching_in(dn, &ops, p) {
                            Ok(r) => {
                                if &r.x != x {
                                    bad.push(format!("{} from {}", p, s.t));
                                }
                            }
                            Err(e) => bad.push(e.to_string()),
                        }
                    }
                    bad
                })
                .collect();
            if bad.is_empty() {
                Ok(format!("{} seeds x {} pairs agree with mutation", seeds.len(), truth.len()))
            } else {
                Err(bad.join("; "))
            }
        });
    }
    if want(Suite::Subword) {
        run_check(&mut report, "subword", || {
            let g = dn.enumerate(1);
            let mut checked = 0;
            for c in coxeter::coxeter_elements(n) {
                let sc = SubwordComplex::new(dn, &c).map_err(|e| e.to_string())?;
                if sc.pairs.iter().collect::<BTreeSet<_>>().len() != n * n {
                    return Err(format!("labels of {:?} are not a bijection", c));
                }
                for t in &g.nodes {
                    if !sc.is_facet(&sc.pseudotriangulation_to_facet(t)) {
                        return Err(format!("{} is not a facet for {:?}", t, c));
                    }
                }
                checked += 1;
            }
            Ok(format!("{} Coxeter elements, {} facets each", checked, g.nodes.len()))
        });
    }
    report
}

fn verify_cmd(common: &Common, suite: Suite) -> Result<String> {
    let dn = rank(common)?;
    if dn.n() > 6 {
        return Err(CliError::Usage("verify supports n <= 6".into()));
    }
    let s0 = resolve_seed(&dn, &common.seed)?;
    let report = verify(&dn, &s0, suite);
    let body = match common.format {
        Format::Json => pretty(&json!({
            "n": dn.n(),
            "passed": report.passed(),
            "checks": report.lines.iter().map(|(k, ok, d)| json!({"name": k, "passed": ok, "detail": d})).collect::<Vec<_>>(),
        })),
        Format::Text => report.lines.iter().map(|(k, ok, d)| format!("{} {}: {}\n", if *ok { "PASS" } else { "FAIL" }, k, d)).collect(),
        f => return Err(unsupported("verify", f)),
    };
    if report.passed() {
        Ok(body)
    } else {
        Err(CliError::Verification(body))
    }
}

fn with_pool<T: Send>(common: &Common, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs(common)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Enumerate(c) => emit(c, enumerate(c)?, out),
        Command::Variables(c) => emit(c, variables(c)?, out),
        Command::Flip { common, pairs } => emit(common, flip(common, pairs)?, out),
        Command::Quiver(c) => emit(c, quiver_cmd(c)?, out),
        Command::Matching { common, delta, opening } => emit(common, matching_cmd(common, delta, *opening)?, out),
        Command::Subword { common, c, facet } => emit(common, subword(common, c, facet)?, out),
        Command::Verify { common, suite } => match with_pool(common, || verify_cmd(common, *suite)) {
            Ok(body) => emit(common, body, out),
            Err(CliError::Verification(body)) => {
                emit(common, body.clone(), out)?;
                Err(CliError::Verification("see report".into()))
            }
            Err(e) => Err(e),
        },
        Command::Serve { port, host, persist } => {
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            rt.block_on(crate::service::serve(host, *port, persist.clone()))?;
            Ok(())
        }
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "pseudotri: {}", e);
            e.exit_code()
        }
    }
}

/// Logging from `PSEUDOTRI_LOG` (e.g. `info`, `debug`), warnings by default.
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("PSEUDOTRI_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).try_init();
}
