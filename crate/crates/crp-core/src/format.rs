//! Text formats: instance documents, influence expressions, sweep value
//! lists, policy selectors, and policy CSV round-trips.

use crate::error::{CrpError, Result};
use crate::grid::TimeGrid;
use crate::influence::InfluenceFunction;
use crate::instance::CrpInstance;
use crate::policy::ControlPolicy;
use std::fmt;
use std::str::FromStr;

/// The 12 recognized instance-document keys, in canonical order.
pub const INSTANCE_KEYS: [&str; 12] = [
    "A0", "I0", "T", "x_max", "mu", "delta1", "delta2", "alpha", "beta1", "beta2", "omega1",
    "omega2",
];

/// Hard cap on how many values an expanded range may produce.
const MAX_SWEEP_VALUES: usize = 1_000_000;

/// Parses an influence expression: `arctan(a, b)`, `log(a, b)`, or
/// `power(a, p)`. Whitespace around the name and the arguments is ignored.
pub fn parse_influence(s: &str) -> Result<InfluenceFunction> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| {
        CrpError::Domain(format!("expected 'family(a, b)' such as 'arctan(0.05, 0.3)', got '{s}'"))
    })?;
    let name = s[..open].trim();
    let rest = &s[open + 1..];
    let inner = rest.strip_suffix(')').ok_or_else(|| {
        CrpError::Domain(format!("influence expression '{s}' does not end with ')'"))
    })?;
    let args: Vec<&str> = inner.split(',').map(str::trim).collect();
    if args.len() != 2 {
        return Err(CrpError::Domain(format!(
            "influence family takes exactly 2 arguments, got {} in '{s}'",
            args.len()
        )));
    }
    let mut nums = [0.0f64; 2];
    for (slot, raw) in nums.iter_mut().zip(&args) {
        *slot = raw
            .parse::<f64>()
            .map_err(|_| CrpError::Domain(format!("'{raw}' is not a number in '{s}'")))?;
    }
    match name {
        "arctan" => InfluenceFunction::scaled_arctan(nums[0], nums[1]),
        "log" => InfluenceFunction::scaled_log(nums[0], nums[1]),
        "power" => InfluenceFunction::power_law(nums[0], nums[1]),
        other => Err(CrpError::Domain(format!(
            "unknown influence family '{other}' (expected arctan, log, or power)"
        ))),
    }
}

/// Parses an instance document: one `key = value` pair per line, all 12 keys
/// exactly once. Blank lines are skipped and `#` starts a comment.
pub fn parse_instance(text: &str) -> Result<CrpInstance> {
    let mut numbers: [Option<f64>; 10] = [None; 10];
    let mut influences: [Option<InfluenceFunction>; 2] = [None; 2];

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CrpError::parse(line_no, format!("expected 'key = value', got '{line}'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        let slot = INSTANCE_KEYS.iter().position(|&k| k == key).ok_or_else(|| {
            CrpError::parse(line_no, format!("unknown key '{key}'"))
        })?;
        if slot == 8 || slot == 9 {
            let parsed = parse_influence(value)
                .map_err(|e| CrpError::parse(line_no, format!("{key}: {e}")))?;
            if influences[slot - 8].replace(parsed).is_some() {
                return Err(CrpError::parse(line_no, format!("duplicate key '{key}'")));
            }
        } else {
            let numeric_slot = if slot < 8 { slot } else { slot - 2 };
            let parsed: f64 = value.parse().map_err(|_| {
                CrpError::parse(line_no, format!("{key}: '{value}' is not a number"))
            })?;
            if !parsed.is_finite() {
                return Err(CrpError::parse(line_no, format!("{key}: '{value}' is not finite")));
            }
            if numbers[numeric_slot].replace(parsed).is_some() {
                return Err(CrpError::parse(line_no, format!("duplicate key '{key}'")));
            }
        }
    }

    let missing: Vec<&str> = INSTANCE_KEYS
        .iter()
        .enumerate()
        .filter(|&(slot, _)| match slot {
            8 | 9 => influences[slot - 8].is_none(),
            s if s < 8 => numbers[s].is_none(),
            s => numbers[s - 2].is_none(),
        })
        .map(|(_, &k)| k)
        .collect();
    if !missing.is_empty() {
        return Err(CrpError::Document(format!("missing key(s): {}", missing.join(", "))));
    }

    let n = |i: usize| numbers[i].unwrap();
    CrpInstance::new(
        n(0),
        n(1),
        n(2),
        n(3),
        n(4),
        n(5),
        n(6),
        n(7),
        influences[0].unwrap(),
        influences[1].unwrap(),
        n(8),
        n(9),
    )
}

/// Writes an instance as a document that [`parse_instance`] reads back
/// field-for-field identically.
pub fn serialize_instance(inst: &CrpInstance) -> String {
    format!(
        "A0 = {}\nI0 = {}\nT = {}\nx_max = {}\nmu = {}\ndelta1 = {}\ndelta2 = {}\n\
         alpha = {}\nbeta1 = {}\nbeta2 = {}\nomega1 = {}\nomega2 = {}\n",
        inst.a0,
        inst.i0,
        inst.t_end,
        inst.x_max,
        inst.mu,
        inst.delta1,
        inst.delta2,
        inst.alpha,
        inst.beta1,
        inst.beta2,
        inst.omega1,
        inst.omega2,
    )
}

/// Parses a sweep value list: a range `start:step:stop` (inclusive, within
/// half a billionth of a step at the top), a comma list `v1,v2,...`, or a
/// single value.
pub fn parse_values_spec(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CrpError::Document("empty value list".into()));
    }
    let num = |raw: &str| -> Result<f64> {
        let v: f64 = raw
            .trim()
            .parse()
            .map_err(|_| CrpError::Document(format!("'{}' is not a number", raw.trim())))?;
        if !v.is_finite() {
            return Err(CrpError::Document(format!("'{}' is not finite", raw.trim())));
        }
        Ok(v)
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CrpError::Document(format!(
                "range takes the form start:step:stop, got '{s}'"
            )));
        }
        let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 {
            return Err(CrpError::Document(format!("range step must be positive, got {step}")));
        }
        if stop < start {
            return Err(CrpError::Document(format!(
                "range stop {stop} is below start {start}"
            )));
        }
        let span = (stop - start) / step;
        if span > (MAX_SWEEP_VALUES - 1) as f64 {
            return Err(CrpError::Document(format!(
                "range '{s}' expands to more than {MAX_SWEEP_VALUES} values"
            )));
        }
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = start + k as f64 * step;
            if v > stop + 1e-9 * step {
                break;
            }
            out.push(v);
            k += 1;
        }
        Ok(out)
    } else if s.contains(',') {
        s.split(',').map(num).collect()
    } else {
        Ok(vec![num(s)?])
    }
}

/// How a simulation policy is chosen on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    /// No response at all.
    Zero,
    /// Hold the response rate at the instance's bound.
    Max,
    /// Hold the response rate at a given level.
    Const(f64),
    /// Load node samples from a policy CSV at this path.
    File(String),
}

impl FromStr for PolicySpec {
    type Err = CrpError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "zero" => return Ok(Self::Zero),
            "max" => return Ok(Self::Max),
            _ => {}
        }
        if let Some(raw) = s.strip_prefix("const:") {
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| CrpError::Document(format!("const policy level '{raw}' is not a number")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(CrpError::Document(format!(
                    "const policy level must be ≥ 0 and finite, got {v}"
                )));
            }
            return Ok(Self::Const(v));
        }
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(CrpError::Document("file policy needs a path after 'file:'".into()));
            }
            return Ok(Self::File(path.to_string()));
        }
        Err(CrpError::Document(format!(
            "unknown policy '{s}' (expected zero, max, const:LEVEL, or file:PATH)"
        )))
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("zero"),
            Self::Max => f.write_str("max"),
            Self::Const(v) => write!(f, "const:{v}"),
            Self::File(p) => write!(f, "file:{p}"),
        }
    }
}

/// Extracts `(t, x)` pairs from a policy CSV: the first two columns of each
/// data row; extra columns are ignored. One leading non-numeric line is
/// accepted as a header.
pub fn parse_policy_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let first = fields.next().unwrap_or("").trim();
        if first.parse::<f64>().is_err() {
            if !seen_data && out.is_empty() {
                continue; // header line
            }
            return Err(CrpError::parse(line_no, format!("'{first}' is not a number")));
        }
        let t: f64 = first.parse().unwrap();
        let second = fields
            .next()
            .ok_or_else(|| CrpError::parse(line_no, "row has no second column".to_string()))?
            .trim();
        let x: f64 = second
            .parse()
            .map_err(|_| CrpError::parse(line_no, format!("'{second}' is not a number")))?;
        if !t.is_finite() || !x.is_finite() {
            return Err(CrpError::parse(line_no, "non-finite value".to_string()));
        }
        out.push((t, x));
        seen_data = true;
    }
    if out.is_empty() {
        return Err(CrpError::Document("policy CSV contains no data rows".into()));
    }
    Ok(out)
}

/// Rebuilds a feasible policy on `grid` from `(t, x)` samples by linear
/// interpolation.
///
/// The samples must be strictly increasing in `t` and span the grid's
/// horizon (to within a billionth of it at each end). Samples a hair above
/// `x_max` — CSV rounding — are clamped; anything further out is rejected.
pub fn resample_policy(
    samples: &[(f64, f64)],
    grid: TimeGrid,
    x_max: f64,
) -> Result<ControlPolicy> {
    if samples.len() < 2 {
        return Err(CrpError::Document(format!(
            "need at least 2 policy samples, got {}",
            samples.len()
        )));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(CrpError::Document(
            "policy sample times must be strictly increasing".into(),
        ));
    }
    let t_end = grid.t_end();
    let tol = 1e-9 * t_end;
    let (t_first, t_last) = (samples[0].0, samples[samples.len() - 1].0);
    if t_first > tol || t_last < t_end - tol {
        return Err(CrpError::Document(format!(
            "policy samples cover [{t_first}, {t_last}] but the horizon is [0, {t_end}]"
        )));
    }
    let value_tol = 1e-9 * (1.0 + x_max);
    let mut values = Vec::with_capacity(grid.node_count());
    let mut cursor = 0usize;
    for t in grid.nodes() {
        while cursor + 2 < samples.len() && samples[cursor + 1].0 < t {
            cursor += 1;
        }
        let (t0, x0) = samples[cursor];
        let (t1, x1) = samples[cursor + 1];
        let frac = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let mut x = x0 * (1.0 - frac) + x1 * frac;
        if x > x_max && x <= x_max + value_tol {
            x = x_max;
        }
        if x < 0.0 && x >= -value_tol {
            x = 0.0;
        }
        values.push(x);
    }
    ControlPolicy::new(grid, values, x_max)
}

/// One CSV number: scientific notation, 12 significant digits — finer than
/// every solver tolerance, coarse enough to keep diffs stable.
pub fn format_number(v: f64) -> String {
    format!("{v:.11e}")
}
