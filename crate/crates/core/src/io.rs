//! Text formats: the `RBCSP 1` instance format with its optional metadata
//! block, and number formatting shared by the CSV writers.
//!
//! ```text
//! RBCSP 1
//! n <n> d <d> k <k> m <m>
//! # params model=RB k=2 n=8 alpha=0.5 r=1 p=0.2 forced=true seed=7
//! # forced_solution 0 2 1 1 0 2 0 1
//! c <v1> ... <vk> <t>
//! <x1> ... <xk>
//! ```
//!
//! The two `#` metadata lines are optional; any other `#` line is a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{parse_err, Error, Result};
use crate::generator::GeneratedInstance;
use crate::model::{Assignment, Constraint, DerivedDims, Instance, InstanceParams, Model};

pub const FORMAT_VERSION: u32 = 1;

/// Contents of an instance file.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub params: Option<InstanceParams>,
    pub forced_solution: Option<Assignment>,
}

impl InstanceFile {
    pub fn into_generated(self) -> Result<GeneratedInstance> {
        let params = self
            .params
            .ok_or_else(|| Error::InvalidArgument("instance file carries no params line".into()))?;
        Ok(GeneratedInstance {
            params,
            dims: DerivedDims {
                d: self.instance.d(),
                m: self.instance.m(),
            },
            instance: self.instance,
            forced_solution: self.forced_solution,
        })
    }
}

impl From<GeneratedInstance> for InstanceFile {
    fn from(g: GeneratedInstance) -> Self {
        InstanceFile {
            instance: g.instance,
            params: Some(g.params),
            forced_solution: g.forced_solution,
        }
    }
}

pub fn params_line(p: &InstanceParams) -> String {
    format!(
        "params model={} k={} n={} alpha={} r={} p={} forced={} seed={}",
        p.model, p.k, p.n, p.alpha, p.r, p.p, p.forced, p.seed
    )
}

pub fn format_instance(
    inst: &Instance,
    params: Option<&InstanceParams>,
    forced: Option<&Assignment>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "RBCSP {FORMAT_VERSION}");
    let _ = writeln!(
        out,
        "n {} d {} k {} m {}",
        inst.n(),
        inst.d(),
        inst.k(),
        inst.m()
    );
    if let Some(p) = params {
        let _ = writeln!(out, "# {}", params_line(p));
    }
    if let Some(t) = forced {
        out.push_str("# forced_solution");
        for v in t.values() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for c in inst.constraints() {
        out.push('c');
        for v in c.scope() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " {}", c.forbidden_len());
        for tuple in c.forbidden_tuples() {
            let line: Vec<String> = tuple.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn format_generated(g: &GeneratedInstance) -> String {
    format_instance(&g.instance, Some(&g.params), g.forced_solution.as_ref())
}

pub fn write_instance(g: &GeneratedInstance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_generated(g))?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<InstanceFile> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| parse_err(lineno, format!("expected a non-negative integer, got `{tok}`")))
        })
        .collect()
}

fn parse_params(body: &str, lineno: usize) -> Result<InstanceParams> {
    let mut fields = std::collections::HashMap::new();
    for tok in body.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("expected key=value, got `{tok}`")))?;
        fields.insert(key, value);
    }
    let get = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| parse_err(lineno, format!("params line lacks `{key}`")))
    };
    let bad = |key: &str| parse_err(lineno, format!("bad value for `{key}`"));
    let params = InstanceParams {
        model: get("model")?.parse::<Model>().map_err(|_| bad("model"))?,
        k: get("k")?.parse().map_err(|_| bad("k"))?,
        n: get("n")?.parse().map_err(|_| bad("n"))?,
        alpha: get("alpha")?.parse().map_err(|_| bad("alpha"))?,
        r: get("r")?.parse().map_err(|_| bad("r"))?,
        p: get("p")?.parse().map_err(|_| bad("p"))?,
        forced: get("forced")?.parse().map_err(|_| bad("forced"))?,
        seed: get("seed")?.parse().map_err(|_| bad("seed"))?,
    };
    params
        .validate()
        .map_err(|e| parse_err(lineno, e.to_string()))?;
    Ok(params)
}

/// A constraint being read: header line, scope, declared count, tuples so far.
type PendingConstraint = (usize, Vec<usize>, usize, Vec<Vec<usize>>);

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (lineno, first) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["RBCSP", v] if *v == FORMAT_VERSION.to_string() => {}
        ["RBCSP", v] => {
            return Err(parse_err(lineno, format!("unsupported format version {v}")));
        }
        _ => return Err(parse_err(lineno, "expected header `RBCSP 1`")),
    }

    let (lineno, dims_line) = lines
        .next()
        .ok_or_else(|| parse_err(lineno + 1, "missing dimension line"))?;
    let toks: Vec<&str> = dims_line.split_whitespace().collect();
    let (n, d, k, m) = match toks.as_slice() {
        ["n", n, "d", d, "k", k, "m", m] => {
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad number `{s}`")))
            };
            (num(n)?, num(d)?, num(k)?, num(m)?)
        }
        _ => return Err(parse_err(lineno, "expected `n <n> d <d> k <k> m <m>`")),
    };

    let mut params = None;
    let mut forced = None;
    let mut constraints = Vec::with_capacity(m);
    let mut pending: Option<PendingConstraint> = None;
    let mut last_line = lineno;

    let close = |pending: &mut Option<PendingConstraint>,
                 constraints: &mut Vec<Constraint>,
                 at: usize|
     -> Result<()> {
        if let Some((start, scope, t, tuples)) = pending.take() {
            if tuples.len() != t {
                return Err(parse_err(
                    at,
                    format!(
                        "constraint at line {start} declares {t} tuples but {} follow",
                        tuples.len()
                    ),
                ));
            }
            let c = Constraint::new(scope, tuples, d).map_err(|e| parse_err(start, e.to_string()))?;
            constraints.push(c);
        }
        Ok(())
    };

    for (lineno, line) in lines {
        last_line = lineno;
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(body) = rest.strip_prefix("params ") {
                params = Some(parse_params(body, lineno)?);
            } else if let Some(body) = rest.strip_prefix("forced_solution") {
                let values = numbers(body, lineno)?;
                if values.len() != n {
                    return Err(parse_err(lineno, format!("forced solution has {} values, n = {n}", values.len())));
                }
                if values.iter().any(|&v| v >= d) {
                    return Err(parse_err(lineno, "forced solution value out of range"));
                }
                forced = Some(Assignment::new(values));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("c ") {
            close(&mut pending, &mut constraints, lineno)?;
            let nums = numbers(rest, lineno)?;
            if nums.len() != k + 1 {
                return Err(parse_err(lineno, format!("expected {k} variables and a tuple count")));
            }
            if let Some(&v) = nums[..k].iter().find(|&&v| v >= n) {
                return Err(parse_err(lineno, format!("variable {v} out of range [0,{n})")));
            }
            pending = Some((lineno, nums[..k].to_vec(), nums[k], Vec::new()));
            continue;
        }
        let tuple = numbers(line, lineno)?;
        match &mut pending {
            None => return Err(parse_err(lineno, "tuple outside any constraint")),
            Some((start, _, t, tuples)) => {
                if tuples.len() == *t {
                    return Err(parse_err(
                        lineno,
                        format!("constraint at line {start} declares {t} tuples, found more"),
                    ));
                }
                if tuple.len() != k {
                    return Err(parse_err(lineno, format!("tuple has {} values, k = {k}", tuple.len())));
                }
                if let Some(&v) = tuple.iter().find(|&&v| v >= d) {
                    return Err(parse_err(lineno, format!("value {v} out of range [0,{d})")));
                }
                tuples.push(tuple);
            }
        }
    }
    close(&mut pending, &mut constraints, last_line + 1)?;
    if constraints.len() != m {
        return Err(parse_err(
            last_line + 1,
            format!("header declares m = {m} constraints, found {}", constraints.len()),
        ));
    }
    let instance = Instance::new(n, d, k, constraints).map_err(|e| parse_err(lineno, e.to_string()))?;
    Ok(InstanceFile {
        instance,
        params,
        forced_solution: forced,
    })
}

/// `%g`-style rendering with 6 significant digits; locale independent.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate;

    #[test]
    fn generated_instance_round_trips() {
        let params = InstanceParams::new(3, 6, 0.6, 1.0, 0.3).with_forced(true).with_seed(11);
        let g = generate(&params).unwrap();
        let text = format_generated(&g);
        let back = parse_instance(&text).unwrap().into_generated().unwrap();
        assert_eq!(back, g);
        assert_eq!(format_generated(&back), text);
    }

    #[test]
    fn empty_instance_round_trips() {
        let inst = Instance::new(3, 2, 2, vec![]).unwrap();
        let text = format_instance(&inst, None, None);
        assert_eq!(text, "RBCSP 1\nn 3 d 2 k 2 m 0\n");
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.instance, inst);
        assert!(back.params.is_none());
    }

    #[test]
    fn short_tuple_list_reports_the_next_line() {
        let text = "RBCSP 1\nn 2 d 2 k 2 m 2\nc 0 1 2\n0 0\nc 0 1 1\n1 1\n";
        match parse_instance(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("declares 2 tuples"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "RBCSP 1\nn 2 d 2 k 2 m 1\nc 0 1 2\n0 0\n";
        assert!(matches!(parse_instance(text), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let cases = [
            ("RBCSP 2\nn 2 d 2 k 2 m 0\n", 1),
            ("CSP 1\n", 1),
            ("RBCSP 1\nn 2 d 2 m 0\n", 2),
            ("RBCSP 1\nn 2 d 2 k 2 m 1\nc 0 5 0\n", 3),
            ("RBCSP 1\nn 2 d 2 k 2 m 1\nc 0 1 1\n0 2\n", 4),
            ("RBCSP 1\nn 2 d 2 k 2 m 1\nc 0 1 1\n0 1\n1 1\n", 5),
            ("RBCSP 1\nn 2 d 2 k 2 m 2\nc 0 1 0\n", 4),
            ("RBCSP 1\nn 2 d 2 k 2 m 0\n# forced_solution 0\n", 3),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(0.234108), "0.234108");
        assert_eq!(fmt_float(0.23410811), "0.234108");
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(1234567.0), "1.23457e6");
        assert_eq!(fmt_float(0.00001234), "1.234e-5");
        assert_eq!(fmt_float(-2.5), "-2.5");
        assert_eq!(fmt_float(123456.0), "123456");
    }
}
