//! configuration parsing and deterministic report assembly for the
//! command-line interface.
//!
//! every section is built twice over the same data: once as a json value
//! and once as plain text. the json path is byte-deterministic for a fixed
//! configuration, and every section carries the hash of the configuration
//! it was produced from. progress and timing go to the diagnostic stream,
//! never into the report.

use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::str::FromStr;

use crate::cech::ext_dimensions;
use crate::curvechains::{
    ext1_long_sequence_dims, hom_dimension, rank_stratify, xi_composition_matrix, Scenario,
    Stratum, XiClass,
};
use crate::localmodel::{build_model, resolve_sheaf, Complex, ModelTag, SheafName};
use crate::mchull::{
    chain_hull_candidate, chain_problem, compare_with_hankel, extend_order, hull_start,
    invariant_subring, single_hull_candidate, single_problem, stopping_check,
    stopping_check_up_to_change, DeformationProblem, HullState, InvariantPresentation,
    MatchVerdict, Poly, StopVerdict,
};
use crate::selftest::{self, Status};
use crate::walls::{component_report, render_form, wall_arrangement, IntersectionDatum};
use crate::Rat;

// ---- errors -----------------------------------------------------------------

/// errors surfaced by the command-line layer. configuration problems exit
/// with code 2, computation failures with code 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("computation error: {0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Computation(_) => 1,
        }
    }
}

fn cfg_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

// ---- scenario ----------------------------------------------------------------

/// the curve configuration a report is about.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    Single { n: i64 },
    Disjoint { ns: Vec<i64> },
    Chain { n1: i64, n2: i64 },
}

impl ScenarioSpec {
    /// parse "single:3", "disjoint:3,4", "chain:3,3".
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let Some((kind, rest)) = s.split_once(':') else {
            return cfg_err(format!("scenario '{s}' is missing ':' (try single:3, disjoint:3,4 or chain:3,3)"));
        };
        let ns: Result<Vec<i64>, _> = rest.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let ns = match ns {
            Ok(v) => v,
            Err(_) => return cfg_err(format!("scenario '{s}': self-intersection list '{rest}' is not integers")),
        };
        if ns.iter().any(|&n| n < 1) {
            return cfg_err(format!("scenario '{s}': self-intersection magnitudes must be >= 1"));
        }
        match kind {
            "single" if ns.len() == 1 => Ok(ScenarioSpec::Single { n: ns[0] }),
            "single" => cfg_err("single takes exactly one number, e.g. single:3"),
            "disjoint" if !ns.is_empty() => Ok(ScenarioSpec::Disjoint { ns }),
            "chain" if ns.len() == 2 => Ok(ScenarioSpec::Chain { n1: ns[0], n2: ns[1] }),
            "chain" => cfg_err("chain takes exactly two numbers, e.g. chain:3,3"),
            _ => cfg_err(format!("unknown scenario kind '{kind}' (single, disjoint, chain)")),
        }
    }

    pub fn render(&self) -> String {
        match self {
            ScenarioSpec::Single { n } => format!("single:{n}"),
            ScenarioSpec::Disjoint { ns } => {
                format!("disjoint:{}", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))
            }
            ScenarioSpec::Chain { n1, n2 } => format!("chain:{n1},{n2}"),
        }
    }

    /// intersection data for the wall computations, with an optional
    /// override of the pairings beta . C_i.
    pub fn datum(&self, beta: &Option<Vec<Rat>>) -> Result<IntersectionDatum, CliError> {
        let base = match self {
            ScenarioSpec::Single { n } => IntersectionDatum::single(*n),
            ScenarioSpec::Disjoint { ns } => IntersectionDatum::disjoint(ns),
            ScenarioSpec::Chain { n1, n2 } => IntersectionDatum::chain(*n1, *n2),
        };
        let mut datum = base.map_err(CliError::Config)?;
        if let Some(b) = beta {
            if b.len() != datum.r {
                return cfg_err(format!(
                    "beta override has {} entries but the scenario has {} curves",
                    b.len(),
                    datum.r
                ));
            }
            datum.beta_curve = b.clone();
            // a beta sitting on a wall has no well-defined twist offsets
            datum.twist_offsets().map_err(CliError::Config)?;
        }
        Ok(datum)
    }
}

// ---- hull target ---------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    WallPoint,
    TriplePoint,
    ChamberPointGeneric,
    ChamberPointAt(Vec<Rat>),
}

fn parse_rat(s: &str) -> Result<Rat, CliError> {
    Rat::from_str(s.trim()).map_err(|_| CliError::Config(format!("'{s}' is not a rational number")))
}

impl Target {
    /// parse "wall_point", "triple_point", "chamber_point:generic",
    /// "chamber_point:1,2,3/2,5".
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "wall_point" => return Ok(Target::WallPoint),
            "triple_point" => return Ok(Target::TriplePoint),
            _ => {}
        }
        let Some(rest) = s.strip_prefix("chamber_point:") else {
            return cfg_err(format!("unknown target '{s}' (wall_point, triple_point, chamber_point:generic, chamber_point:c1,c2,...)"));
        };
        if rest == "generic" {
            return Ok(Target::ChamberPointGeneric);
        }
        let coeffs: Result<Vec<Rat>, CliError> = rest.split(',').map(parse_rat).collect();
        Ok(Target::ChamberPointAt(coeffs?))
    }

    pub fn render(&self) -> String {
        match self {
            Target::WallPoint => "wall_point".into(),
            Target::TriplePoint => "triple_point".into(),
            Target::ChamberPointGeneric => "chamber_point:generic".into(),
            Target::ChamberPointAt(cs) => format!(
                "chamber_point:{}",
                cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

// ---- object pairs ----------------------------------------------------------------

/// an object of the derived category that the ext command can resolve.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectName {
    /// O_C(k)[shift] on a single curve
    Curve { k: i64, shift: i64 },
    /// O_C12(a,b)[shift] on a chain
    ChainBundle { a: i64, b: i64, shift: i64 },
    /// the rank-two extension at the wall (single or chain model)
    Extension,
    /// the skyscraper at the torus-fixed point
    Point,
}

fn split_shift(s: &str) -> Result<(&str, i64), CliError> {
    if let Some(rest) = s.strip_suffix(']') {
        let Some((head, sh)) = rest.rsplit_once('[') else {
            return cfg_err(format!("object '{s}': unbalanced shift brackets"));
        };
        let shift: i64 = sh
            .parse()
            .map_err(|_| CliError::Config(format!("object '{s}': shift '[{sh}]' is not an integer")))?;
        Ok((head, shift))
    } else {
        Ok((s, 0))
    }
}

fn parse_args(head: &str, name: &str, s: &str) -> Result<Vec<i64>, CliError> {
    let rest = &head[name.len()..];
    if rest.is_empty() {
        return Ok(vec![]);
    }
    let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
        return cfg_err(format!("object '{s}': expected {name}(...) twist arguments"));
    };
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Config(format!("object '{s}': twist '{t}' is not an integer")))
        })
        .collect()
}

impl ObjectName {
    /// parse "OC", "OC(-1)", "OC(-1)[1]", "OC12(0,-1)", "E", "P".
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (head, shift) = split_shift(s.trim())?;
        if head == "E" {
            if shift != 0 {
                return cfg_err(format!("object '{s}': shifts of E are not supported"));
            }
            return Ok(ObjectName::Extension);
        }
        if head == "P" || head == "point" {
            if shift != 0 {
                return cfg_err(format!("object '{s}': shifts of the point are not supported"));
            }
            return Ok(ObjectName::Point);
        }
        if head.starts_with("OC12") {
            let args = parse_args(head, "OC12", s)?;
            if args.len() != 2 {
                return cfg_err(format!("object '{s}': OC12 takes two twists, e.g. OC12(0,-1)"));
            }
            return Ok(ObjectName::ChainBundle { a: args[0], b: args[1], shift });
        }
        if head.starts_with("OC") {
            let args = parse_args(head, "OC", s)?;
            let k = match args.len() {
                0 => 0,
                1 => args[0],
                _ => return cfg_err(format!("object '{s}': OC takes at most one twist")),
            };
            return Ok(ObjectName::Curve { k, shift });
        }
        cfg_err(format!("unknown object '{s}' (OC, OC(k), OC(k)[m], OC12(a,b), E, P)"))
    }

    pub fn render(&self) -> String {
        let with_shift = |base: String, shift: i64| {
            if shift == 0 {
                base
            } else {
                format!("{base}[{shift}]")
            }
        };
        match self {
            ObjectName::Curve { k, shift } => {
                let base = if *k == 0 { "OC".to_string() } else { format!("OC({k})") };
                with_shift(base, *shift)
            }
            ObjectName::ChainBundle { a, b, shift } => with_shift(format!("OC12({a},{b})"), *shift),
            ObjectName::Extension => "E".into(),
            ObjectName::Point => "P".into(),
        }
    }

    fn resolve(&self, scenario: &ScenarioSpec) -> Result<Complex, CliError> {
        match (self, scenario) {
            (ObjectName::Curve { k, shift }, ScenarioSpec::Single { n }) => {
                let m = build_model(ModelTag::Single { n: *n });
                Ok(resolve_sheaf(&SheafName::OnCurve { k: *k }, &m).shifted(*shift))
            }
            (ObjectName::ChainBundle { a, b, shift }, ScenarioSpec::Chain { n1, n2 }) => {
                let m = build_model(ModelTag::Chain { n1: *n1, n2: *n2 });
                Ok(resolve_sheaf(&SheafName::OnChain { a: *a, b: *b }, &m).shifted(*shift))
            }
            (ObjectName::Extension, ScenarioSpec::Single { n }) => {
                let m = build_model(ModelTag::Single { n: *n });
                Ok(resolve_sheaf(&SheafName::SingleE, &m))
            }
            (ObjectName::Extension, ScenarioSpec::Chain { n1, n2 }) => {
                let m = build_model(ModelTag::Chain { n1: *n1, n2: *n2 });
                Ok(resolve_sheaf(&SheafName::ChainE, &m))
            }
            (ObjectName::Point, ScenarioSpec::Single { n }) => {
                let m = build_model(ModelTag::Single { n: *n });
                Ok(resolve_sheaf(&SheafName::Point, &m))
            }
            (ObjectName::Point, ScenarioSpec::Chain { n1, n2 }) => {
                let m = build_model(ModelTag::Chain { n1: *n1, n2: *n2 });
                Ok(resolve_sheaf(&SheafName::Point, &m))
            }
            _ => cfg_err(format!(
                "object {} does not live on scenario {}",
                self.render(),
                scenario.render()
            )),
        }
    }
}

/// a pair "A,B" for the ext command.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub a: ObjectName,
    pub b: ObjectName,
}

impl PairSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        // split at the top level: commas inside (...) belong to twists
        let mut depth = 0usize;
        let mut split = None;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let Some(i) = split else {
            return cfg_err(format!("pair '{s}' must be two objects separated by a comma"));
        };
        Ok(PairSpec { a: ObjectName::parse(&s[..i])?, b: ObjectName::parse(&s[i + 1..])? })
    }

    pub fn render(&self) -> String {
        format!("{},{}", self.a.render(), self.b.render())
    }
}

// ---- configuration ---------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => cfg_err(format!("unknown format '{s}' (text, json)")),
        }
    }
}

/// a fully validated run configuration. defaults: range -3..3, order 5.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: ScenarioSpec,
    pub beta: Option<Vec<Rat>>,
    pub target: Option<Target>,
    pub pair: Option<PairSpec>,
    pub range: (i64, i64),
    pub order: u32,
    pub window_margin: Option<i64>,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            scenario: ScenarioSpec::Single { n: 3 },
            beta: None,
            target: None,
            pair: None,
            range: (-3, 3),
            order: 5,
            window_margin: None,
            format: Format::Text,
        }
    }
}

pub fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let Some((a, b)) = s.split_once("..") else {
        return cfg_err(format!("range '{s}' must look like -3..3"));
    };
    let lo: i64 = a.trim().parse().map_err(|_| CliError::Config(format!("range start '{a}' is not an integer")))?;
    let hi: i64 = b.trim().parse().map_err(|_| CliError::Config(format!("range end '{b}' is not an integer")))?;
    if lo > hi {
        return cfg_err(format!("range '{s}' is empty"));
    }
    Ok((lo, hi))
}

pub fn parse_beta(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',').map(parse_rat).collect()
}

impl Config {
    /// the canonical json echo of the configuration (also the hash input).
    pub fn to_json(&self) -> Value {
        json!({
            "scenario": self.scenario.render(),
            "beta": self.beta.as_ref().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            "target": self.target.as_ref().map(|t| t.render()),
            "pair": self.pair.as_ref().map(|p| p.render()),
            "range": format!("{}..{}", self.range.0, self.range.1),
            "order": self.order,
            "window_margin": self.window_margin,
        })
    }

    /// fnv-1a hash of the canonical configuration echo, as fixed-width hex.
    pub fn hash(&self) -> String {
        let bytes = self.to_json().to_string();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in bytes.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

// ---- sections ----------------------------------------------------------------------

/// one report section: a tagged json body plus its plain-text rendering.
pub struct Section {
    pub kind: &'static str,
    pub body: Value,
    pub text: String,
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// render a hull-ideal polynomial in the problem's coordinate names.
pub fn render_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (mono, c) in &p.terms {
        let mut factors = Vec::new();
        for (i, &e) in mono.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{e}", names[i])),
            }
        }
        let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
        let (sign, mag) = if c < &Rat::zero() { ("-", -c.clone()) } else { ("+", c.clone()) };
        let coeff = if mag == Rat::from_integer(1.into()) && !factors.is_empty() {
            body
        } else {
            format!("{mag}*{body}")
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&coeff);
    }
    out
}

// ---- walls section -------------------------------------------------------------------

pub fn section_walls(cfg: &Config) -> Result<Section, CliError> {
    let datum = cfg.scenario.datum(&cfg.beta)?;
    let arr = wall_arrangement(&datum).map_err(CliError::Computation)?;
    let mut text = String::new();
    text.push_str(&format!("wall arrangement for {}\n", cfg.scenario.render()));
    let mut walls_json = Vec::new();
    for w in &arr.walls {
        let cof: Vec<String> = w.cofactors.iter().map(|c| c.render(datum.r)).collect();
        text.push_str(&format!(
            "  {}: {} = 0   destabilizer {}   cofactors {}\n",
            w.name,
            render_form(&w.form),
            w.destabilizer.render(datum.r),
            cof.join(" (+) ")
        ));
        walls_json.push(json!({
            "name": w.name,
            "equation": render_form(&w.form),
            "destabilizer": w.destabilizer.render(datum.r),
            "cofactors": cof,
        }));
    }
    text.push_str(&format!(
        "  {} chambers, {:?}, geometric chamber {}\n",
        arr.chambers.len(),
        arr.transversality,
        arr.chambers[arr.geometric].label
    ));
    let mut chambers_json = Vec::new();
    let mut reports_json = Vec::new();
    for c in &arr.chambers {
        chambers_json.push(json!({
            "label": c.label.to_string(),
            "signs": c.signs,
            "representative": rats(&c.representative),
            "bounding_walls": c.bounding_walls.iter().map(|&i| arr.walls[i].name.clone()).collect::<Vec<_>>(),
        }));
        match component_report(&arr, &datum, &c.label) {
            Ok(rep) => {
                let names: Vec<String> = rep.components.iter().map(|k| k.name.clone()).collect();
                text.push_str(&format!("  chamber {}: moduli {}\n", c.label, names.join(" U ")));
                reports_json.push(json!({
                    "chamber": c.label.to_string(),
                    "report": serde_json::to_value(&rep).unwrap(),
                }));
            }
            Err(note) => {
                text.push_str(&format!("  chamber {}: {note}\n", c.label));
                reports_json.push(json!({
                    "chamber": c.label.to_string(),
                    "note": note,
                }));
            }
        }
    }
    let body = json!({
        "scenario": cfg.scenario.render(),
        "beta": rats(&datum.beta_curve),
        "walls": walls_json,
        "chambers": chambers_json,
        "transversality": format!("{:?}", arr.transversality),
        "geometric_chamber": arr.chambers[arr.geometric].label.to_string(),
        "component_reports": reports_json,
    });
    Ok(Section { kind: "walls", body, text })
}

// ---- ext section ----------------------------------------------------------------------

fn dims_json(dims: &BTreeMap<i64, usize>) -> Value {
    let mut m = serde_json::Map::new();
    for (k, v) in dims {
        m.insert(k.to_string(), json!(v));
    }
    Value::Object(m)
}

pub fn section_ext(cfg: &Config) -> Result<Section, CliError> {
    match (&cfg.pair, &cfg.scenario) {
        (Some(pair), _) => ext_pair_section(cfg, pair),
        (None, ScenarioSpec::Chain { .. }) => ext_table_section(cfg),
        (None, ScenarioSpec::Single { .. }) => {
            ext_pair_section(cfg, &PairSpec { a: ObjectName::Extension, b: ObjectName::Extension })
        }
        (None, ScenarioSpec::Disjoint { .. }) => {
            cfg_err("ext needs a single or chain scenario (disjoint curves have no joint local model)")
        }
    }
}

fn ext_pair_section(cfg: &Config, pair: &PairSpec) -> Result<Section, CliError> {
    let e = pair.a.resolve(&cfg.scenario)?;
    let f = pair.b.resolve(&cfg.scenario)?;
    let (dims, wi) = ext_dimensions(&e, &f, cfg.window_margin);
    let mut text = format!("ext dimensions for {} on {}\n", pair.render(), cfg.scenario.render());
    for (k, d) in &dims {
        text.push_str(&format!("  Ext^{k} = {d}\n"));
    }
    if dims.is_empty() {
        text.push_str("  all ext groups vanish\n");
    }
    // when the second object carries a shift, also spell the dimensions out
    // in the unshifted degrees for easy comparison with tables
    let shift = match &pair.b {
        ObjectName::Curve { shift, .. } | ObjectName::ChainBundle { shift, .. } => *shift,
        _ => 0,
    };
    if shift != 0 {
        for (k, d) in &dims {
            text.push_str(&format!(
                "  (equals Ext^{} of the unshifted pair = {d})\n",
                k + shift
            ));
        }
    }
    text.push_str(&format!(
        "  weight window {:?}..{:?}, {} enlargement(s)\n",
        wi.lo, wi.hi, wi.enlargements
    ));
    let body = json!({
        "scenario": cfg.scenario.render(),
        "pair": pair.render(),
        "dimensions": dims_json(&dims),
        "window": { "lo": [wi.lo.0, wi.lo.1], "hi": [wi.hi.0, wi.hi.1], "enlargements": wi.enlargements },
    });
    Ok(Section { kind: "ext", body, text })
}

fn ext_table_section(cfg: &Config) -> Result<Section, CliError> {
    let ScenarioSpec::Chain { n1, n2 } = cfg.scenario else { unreachable!() };
    let model = build_model(ModelTag::Chain { n1, n2 });
    let e = resolve_sheaf(&SheafName::OnChain { a: 0, b: 0 }, &model);
    let (lo, hi) = cfg.range;
    let mut agree = true;
    let mut rows = Vec::new();
    let mut text = format!(
        "hom dimensions Hom(O_C12, O_C12(a,b)) on {}, a,b in {lo}..{hi}\n",
        cfg.scenario.render()
    );
    text.push_str("       b:");
    for b in lo..=hi {
        text.push_str(&format!("{b:>4}"));
    }
    text.push('\n');
    for a in lo..=hi {
        let mut row = Vec::new();
        let mut line = format!("  a={a:>3}: ");
        for b in lo..=hi {
            eprintln!("ext table: computing ({a},{b})");
            let f = resolve_sheaf(&SheafName::OnChain { a, b }, &model);
            let (dims, _) = ext_dimensions(&e, &f, cfg.window_margin);
            let got = dims.get(&0).copied().unwrap_or(0);
            if got != hom_dimension(a, b) {
                agree = false;
            }
            line.push_str(&format!("{got:>4}"));
            row.push(got);
        }
        text.push_str(&line);
        text.push('\n');
        rows.push(row);
    }
    text.push_str(&format!(
        "  agreement with the closed form: {}\n",
        if agree { "yes" } else { "NO" }
    ));
    if !agree {
        return Err(CliError::Computation(
            "cech hom table disagrees with the closed form".into(),
        ));
    }
    let body = json!({
        "scenario": cfg.scenario.render(),
        "range": format!("{lo}..{hi}"),
        "degree_zero_table": rows,
        "closed_form_agreement": agree,
    });
    Ok(Section { kind: "ext_table", body, text })
}

// ---- hull section ------------------------------------------------------------------------

fn hull_orders(p: &DeformationProblem, trunc: u32, upto: usize) -> Result<Vec<HullState>, CliError> {
    let mut states = vec![hull_start(p, trunc)];
    for _ in 1..upto {
        let next = extend_order(p, states.last().unwrap()).map_err(CliError::Computation)?;
        states.push(next);
    }
    Ok(states)
}

/// the new generators found at one order, sign-normalized and deduplicated.
fn new_gens(st: &HullState, names: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for g in &st.obstruction_gens {
        let lead_negative = g.terms.values().next_back().map(|c| c < &Rat::zero()).unwrap_or(false);
        let g = if lead_negative { g.neg() } else { g.clone() };
        let s = render_poly(&g, names);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// one transcript line "J_q = m*J_{q-1} + (new generators)".
fn ideal_line(st: &HullState, names: &[String]) -> String {
    let base = if st.order == 2 { "m^3".to_string() } else { format!("m*J_{}", st.order - 1) };
    let gens = new_gens(st, names);
    if gens.is_empty() {
        format!("J_{} = {base}", st.order)
    } else {
        format!("J_{} = {base} + ({})", st.order, gens.join(", "))
    }
}

fn verdict_string(v: &StopVerdict) -> String {
    match v {
        StopVerdict::HullEqualsCandidate { d } => format!("hull equals the candidate at degree {d}"),
        other => format!("{other:?}"),
    }
}

pub fn section_hull(cfg: &Config) -> Result<Section, CliError> {
    let target = match (&cfg.target, &cfg.scenario) {
        (Some(t), _) => t.clone(),
        (None, ScenarioSpec::Single { .. }) => Target::WallPoint,
        (None, ScenarioSpec::Chain { .. }) => Target::TriplePoint,
        (None, ScenarioSpec::Disjoint { .. }) => {
            return cfg_err("hull needs a single or chain scenario, or an explicit --target")
        }
    };
    match (&target, &cfg.scenario) {
        (Target::WallPoint, ScenarioSpec::Single { n }) => hull_wall_point(cfg, *n),
        (Target::TriplePoint, ScenarioSpec::Chain { n1, n2 }) => hull_triple_point(cfg, *n1, *n2),
        (Target::ChamberPointGeneric, _) => hull_chamber_point(cfg, None),
        (Target::ChamberPointAt(cs), _) => hull_chamber_point(cfg, Some(cs.clone())),
        (t, s) => cfg_err(format!(
            "target {} does not apply to scenario {}",
            t.render(),
            s.render()
        )),
    }
}

fn hull_wall_point(cfg: &Config, n: i64) -> Result<Section, CliError> {
    if n < 2 {
        return cfg_err("the wall-point deformation problem needs n >= 2");
    }
    if cfg.order < 4 {
        return cfg_err("the stopping checks need a truncation order of at least 4");
    }
    eprintln!("hull: single({n}) wall point, iterating to order two");
    let p = single_problem(n);
    let names = p.coord_names.clone();
    let states = hull_orders(&p, cfg.order, 2)?;
    let st2 = states.last().unwrap();
    let candidate = single_hull_candidate(n, cfg.order);
    let verdict = match stopping_check(st2, &candidate, 3) {
        StopVerdict::HullEqualsCandidate { d } => (StopVerdict::HullEqualsCandidate { d }, None),
        _ => stopping_check_up_to_change(st2, &candidate, 3, &p.combined_weights()),
    };
    let mut text = format!("deformation hull at the wall point of single:{n}\n");
    text.push_str(&format!("  coordinates: {}\n", names.join(", ")));
    text.push_str("  J_1 = m^2\n");
    for st in &states[1..] {
        text.push_str(&format!("  {}\n", ideal_line(st, &names)));
    }
    text.push_str(&format!("  stopping check: {}\n", verdict_string(&verdict.0)));
    if verdict.0 != (StopVerdict::HullEqualsCandidate { d: 3 }) {
        return Err(CliError::Computation(format!(
            "single({n}) hull did not stop on the quadric candidate: {:?}",
            verdict.0
        )));
    }
    // the invariant ring of the germ under the 1/n(1,1) weights
    let pres = invariant_subring(&candidate, &p.aut_weights, &p.geo_weights, 2, 2);
    let hankel = compare_with_hankel(&pres, n as usize);
    let (inv_json, inv_text) = invariant_json(&pres, &names, &hankel, n);
    text.push_str(&inv_text);
    let body = json!({
        "scenario": cfg.scenario.render(),
        "target": "wall_point",
        "coordinates": names,
        "ideals": states[1..].iter().map(|st| json!({
            "order": st.order,
            "display": ideal_line(st, &names),
            "new_generators": new_gens(st, &names),
        })).collect::<Vec<_>>(),
        "stopping": verdict_string(&verdict.0),
        "invariants": inv_json,
    });
    Ok(Section { kind: "hull", body, text })
}

fn render_substitution(
    subst: &Option<Vec<(usize, Vec<u32>, Rat)>>,
    names: &[String],
) -> Option<String> {
    let subst = subst.as_ref()?;
    let parts: Vec<String> = subst
        .iter()
        .map(|(i, mono, c)| {
            let m = Poly::monomial(names.len(), mono, c.clone());
            format!("{} -> {} {}", names[*i], names[*i], {
                let s = render_poly(&m, names);
                if s.starts_with('-') {
                    format!("- {}", &s[1..])
                } else {
                    format!("+ {s}")
                }
            })
        })
        .collect();
    Some(parts.join(", "))
}

fn hull_triple_point(cfg: &Config, n1: i64, n2: i64) -> Result<Section, CliError> {
    if n1 < 3 || n2 < 3 {
        return cfg_err("the triple-point deformation problem needs n1, n2 >= 3");
    }
    if cfg.order < 5 {
        return cfg_err("the triple-point stopping check needs a truncation order of at least 5");
    }
    eprintln!("hull: chain({n1},{n2}) triple point, iterating to order three");
    let p = chain_problem(n1, n2);
    let names = p.coord_names.clone();
    let states = hull_orders(&p, cfg.order, 3)?;
    let st3 = states.last().unwrap();
    let candidate = chain_hull_candidate(n1, n2, cfg.order);
    let (verdict, subst) = stopping_check_up_to_change(st3, &candidate, 4, &p.combined_weights());
    let mut text = format!("deformation hull at the triple point of chain:{n1},{n2}\n");
    text.push_str(&format!("  coordinates: {}\n", names.join(", ")));
    text.push_str("  J_1 = m^2\n");
    for st in &states[1..] {
        text.push_str(&format!("  {}\n", ideal_line(st, &names)));
    }
    text.push_str(&format!("  stopping check: {}\n", verdict_string(&verdict)));
    if let Some(s) = render_substitution(&subst, &names) {
        text.push_str(&format!("  after the coordinate change {s}\n"));
    }
    if verdict != (StopVerdict::HullEqualsCandidate { d: 4 }) {
        return Err(CliError::Computation(format!(
            "chain({n1},{n2}) hull did not stop on the candidate: {verdict:?}"
        )));
    }
    let body = json!({
        "scenario": cfg.scenario.render(),
        "target": "triple_point",
        "coordinates": names,
        "ideals": states[1..].iter().map(|st| json!({
            "order": st.order,
            "display": ideal_line(st, &names),
            "new_generators": new_gens(st, &names),
        })).collect::<Vec<_>>(),
        "stopping": verdict_string(&verdict),
        "coordinate_change": render_substitution(&subst, &names),
    });
    Ok(Section { kind: "hull", body, text })
}

fn hull_chamber_point(cfg: &Config, coeffs: Option<Vec<Rat>>) -> Result<Section, CliError> {
    let scenario = match cfg.scenario {
        ScenarioSpec::Single { n } => {
            if n < 2 {
                return cfg_err("chamber-point classes need n >= 2");
            }
            Scenario::Single { n }
        }
        ScenarioSpec::Chain { n1, n2 } => Scenario::Chain { n1, n2 },
        ScenarioSpec::Disjoint { .. } => {
            return cfg_err("chamber-point classes need a single or chain scenario")
        }
    };
    let len = match scenario {
        Scenario::Single { n } => n as usize,
        Scenario::Chain { n1, n2 } => (n1 + n2 - 2) as usize,
    };
    // the deterministic generic choice: coefficients 1..len, which lies in
    // the generic stratum for every scenario the engine supports
    let coeffs = match coeffs {
        Some(c) => {
            if c.len() != len {
                return cfg_err(format!(
                    "chamber point needs {len} coordinates for {}",
                    cfg.scenario.render()
                ));
            }
            c
        }
        None => (1..=len as i64).map(crate::rat).collect(),
    };
    let xi = XiClass::new(scenario, coeffs.clone());
    let stratum = rank_stratify(&xi);
    let rank = xi_composition_matrix(&xi).rank();
    let dims = ext1_long_sequence_dims(&xi);
    let mut text = format!(
        "first-order class at a chamber point of {}\n  coefficients ({})\n",
        cfg.scenario.render(),
        rats(&coeffs).join(", ")
    );
    text.push_str(&format!("  stratum {stratum:?}, composition rank {rank}\n"));
    text.push_str(&format!(
        "  self-extension dimension {} (kernel {}, obstruction space {})\n",
        dims.ext1_dim, dims.kernel_dim, dims.ext2_dim
    ));
    if matches!(stratum, Stratum::Generic) {
        text.push_str(&format!(
            "  generic stratum: smooth hull of dimension {}\n",
            dims.ext1_dim
        ));
    }
    let body = json!({
        "scenario": cfg.scenario.render(),
        "target": cfg.target.as_ref().map(|t| t.render()).unwrap_or_else(|| "chamber_point:generic".into()),
        "coefficients": rats(&coeffs),
        "stratum": format!("{stratum:?}"),
        "composition_rank": rank,
        "ext1_dim": dims.ext1_dim,
        "kernel_dim": dims.kernel_dim,
        "ext2_dim": dims.ext2_dim,
        "smooth": matches!(stratum, Stratum::Generic),
    });
    Ok(Section { kind: "hull", body, text })
}

// ---- invariants section ----------------------------------------------------------------

fn invariant_json(
    pres: &InvariantPresentation,
    names: &[String],
    verdict: &MatchVerdict,
    n: i64,
) -> (Value, String) {
    let gens: Vec<String> = pres
        .gen_monos
        .iter()
        .map(|m| render_poly(&Poly::monomial(names.len(), m, crate::rat(1)), names))
        .collect();
    let verdict_str = match verdict {
        MatchVerdict::Match { .. } => format!("matches the rank-one hankel ideal of the 1/{n}(1,1) germ"),
        other => format!("{other:?}"),
    };
    let mut text = format!("  invariant subring: {} generators ({})\n", gens.len(), gens.join(", "));
    text.push_str(&format!("  {} relation(s); {verdict_str}\n", pres.relations.len()));
    (
        json!({
            "generators": gens,
            "relation_count": pres.relations.len(),
            "hankel_verdict": verdict_str,
            "matches_hankel": matches!(verdict, MatchVerdict::Match { .. }),
        }),
        text,
    )
}

pub fn section_invariants(cfg: &Config) -> Result<Section, CliError> {
    let ns: Vec<i64> = match &cfg.scenario {
        ScenarioSpec::Single { n } => vec![*n],
        ScenarioSpec::Disjoint { ns } => ns.clone(),
        ScenarioSpec::Chain { n1, n2 } => vec![*n1, *n2],
    };
    let mut text = format!("invariant rings of the wall-point germs of {}\n", cfg.scenario.render());
    let mut curves = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        if n < 2 {
            text.push_str(&format!(
                "  curve {}: n = 1, the contraction is smooth; no singular germ\n",
                i + 1
            ));
            curves.push(json!({ "curve": i + 1, "n": n, "note": "smooth contraction, no singular germ" }));
            continue;
        }
        eprintln!("invariants: curve {} (n = {n})", i + 1);
        let p = single_problem(n);
        let hull_ideal = single_hull_candidate(n, cfg.order.max(4));
        let pres = invariant_subring(&hull_ideal, &p.aut_weights, &p.geo_weights, 2, 2);
        let verdict = compare_with_hankel(&pres, n as usize);
        text.push_str(&format!("  curve {} (1/{n}(1,1) germ):\n", i + 1));
        let (j, t) = invariant_json(&pres, &p.coord_names, &verdict, n);
        for line in t.lines() {
            text.push_str(&format!("  {line}\n"));
        }
        curves.push(json!({ "curve": i + 1, "n": n, "invariants": j }));
    }
    let body = json!({
        "scenario": cfg.scenario.render(),
        "curves": curves,
    });
    Ok(Section { kind: "invariants", body, text })
}

// ---- selftest section -------------------------------------------------------------------

pub fn section_selftest(cfg: &Config) -> Result<Section, CliError> {
    let outcomes = selftest::run_all(cfg.window_margin);
    let mut text = String::from("acceptance suite\n");
    let mut items = Vec::new();
    let mut failed = 0usize;
    let mut limited = 0usize;
    for o in &outcomes {
        let (word, detail) = match &o.status {
            Status::Pass => ("pass", None),
            Status::EnvironmentLimited(m) => {
                limited += 1;
                ("environment-limited", Some(m.clone()))
            }
            Status::Fail(m) => {
                failed += 1;
                ("FAIL", Some(m.clone()))
            }
        };
        text.push_str(&format!("  criterion {:>2}: {:<55} {word}\n", o.index, o.name));
        if let Some(d) = &detail {
            text.push_str(&format!("               {d}\n"));
        }
        items.push(json!({
            "index": o.index,
            "name": o.name,
            "status": word,
            "detail": detail,
        }));
    }
    let overall = if failed > 0 {
        "fail"
    } else if limited > 0 {
        "environment-limited"
    } else {
        "pass"
    };
    text.push_str(&format!("  overall: {overall}\n"));
    let body = json!({
        "criteria": items,
        "overall": overall,
    });
    Ok(Section { kind: "selftest", body, text })
}

// ---- assembly -------------------------------------------------------------------------------

pub struct Report {
    pub json: String,
    pub text: String,
}

pub const SCHEMA_VERSION: &str = "1";

/// stitch sections into the final report. every section is stamped with
/// the config hash; json output is byte-deterministic.
pub fn assemble(cfg: &Config, sections: Vec<Section>) -> Report {
    let hash = cfg.hash();
    let mut text = String::new();
    let mut json_sections = Vec::new();
    for s in sections {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), json!(s.kind));
        obj.insert("config_hash".into(), json!(hash));
        if let Value::Object(body) = s.body {
            for (k, v) in body {
                obj.insert(k, v);
            }
        }
        json_sections.push(Value::Object(obj));
        text.push_str(&s.text);
        text.push_str(&format!("  [config {hash}]\n"));
    }
    let top = json!({
        "schema_version": SCHEMA_VERSION,
        "config": {
            "echo": cfg.to_json(),
            "hash": hash,
        },
        "sections": json_sections,
    });
    Report { json: format!("{}\n", serde_json::to_string_pretty(&top).unwrap()), text }
}

/// build the sections for one subcommand name.
pub fn run_command(cfg: &Config, command: &str) -> Result<Vec<Section>, CliError> {
    match command {
        "walls" => Ok(vec![section_walls(cfg)?]),
        "ext" => Ok(vec![section_ext(cfg)?]),
        "hull" => Ok(vec![section_hull(cfg)?]),
        "invariants" => Ok(vec![section_invariants(cfg)?]),
        "selftest" => Ok(vec![section_selftest(cfg)?]),
        "report" => {
            let mut out = vec![section_walls(cfg)?];
            match &cfg.scenario {
                ScenarioSpec::Disjoint { .. } => {}
                _ => {
                    out.push(section_ext(cfg)?);
                    out.push(section_hull(cfg)?);
                }
            }
            out.push(section_invariants(cfg)?);
            Ok(out)
        }
        other => cfg_err(format!("unknown command '{other}'")),
    }
}
