use std::collections::BTreeMap;

use super::expr::{compile_expr, parse_expr_at};
use crate::boolmodel::{Action, BoolFn, CostModel, JointDist, Model, Utility};
use crate::error::{Error, Result};
use crate::sweep::BASELINE;

/// Default cost grid declared by a `sweep` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepDefaults {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

/// A parsed scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDoc {
    pub source: String,
    pub model: Model,
    pub outcome_name: String,
    /// Measurement names in declaration order.
    pub names: Vec<String>,
    pub sweep: Option<SweepDefaults>,
}

/// A whitespace-delimited word and its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Word<'a> {
    column: usize,
    text: &'a str,
}

struct Line<'a> {
    number: usize,
    /// Content with the comment removed.
    text: &'a str,
    words: Vec<Word<'a>>,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Self {
        let text = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut words = Vec::new();
        let mut start: Option<usize> = None;
        for (i, ch) in text.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    words.push(Word {
                        column: column_of(text, s),
                        text: &text[s..i],
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            words.push(Word {
                column: column_of(text, s),
                text: &text[s..],
            });
        }
        Line {
            number,
            text,
            words,
        }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.number, column, message)
    }

    fn end_column(&self) -> usize {
        self.text.trim_end().chars().count() + 1
    }

    fn keyword(&self) -> Word<'a> {
        self.words[0]
    }

    /// Exactly `n` words after the keyword (or the keyword pair).
    fn expect_args(&self, skip: usize, n: usize, usage: &str) -> Result<&[Word<'a>]> {
        let args = &self.words[skip..];
        if args.len() < n {
            return Err(self.error(self.end_column(), format!("expected: {usage}")));
        }
        if args.len() > n {
            return Err(self.error(args[n].column, format!("unexpected '{}'; expected: {usage}", args[n].text)));
        }
        Ok(args)
    }

    fn number(&self, w: Word<'_>) -> Result<f64> {
        match w.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(w.column, format!("expected a number, found '{}'", w.text))),
        }
    }

    fn integer(&self, w: Word<'_>) -> Result<usize> {
        w.text
            .parse::<usize>()
            .map_err(|_| self.error(w.column, format!("expected a nonnegative integer, found '{}'", w.text)))
    }

    /// Splits `<keyword> NAME = expr` into the name and the expression with
    /// its starting column.
    fn binding(&self) -> Result<(Word<'a>, &'a str, usize)> {
        let kw = self.keyword();
        let usage = format!("{} NAME = <expr>", kw.text);
        let after_kw = byte_of(self.text, kw.column) + kw.text.len();
        let rest = &self.text[after_kw..];
        let name_start = after_kw + (rest.len() - rest.trim_start().len());
        let name_len = self.text[name_start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.text.len() - name_start);
        let name_col = column_of(self.text, name_start);
        if name_len == 0 {
            return Err(self.error(name_col, format!("expected a name; usage: {usage}")));
        }
        let name = &self.text[name_start..name_start + name_len];
        if !name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return Err(self.error(name_col, format!("invalid name '{name}'")));
        }
        let after_name = name_start + name_len;
        let rest = &self.text[after_name..];
        let eq = after_name + (rest.len() - rest.trim_start().len());
        if !self.text[eq..].starts_with('=') {
            return Err(self.error(column_of(self.text, eq), format!("expected '='; usage: {usage}")));
        }
        let expr_start = eq + 1;
        Ok((
            Word {
                column: name_col,
                text: name,
            },
            &self.text[expr_start..],
            column_of(self.text, expr_start),
        ))
    }
}

fn column_of(text: &str, byte: usize) -> usize {
    text[..byte].chars().count() + 1
}

fn byte_of(text: &str, column: usize) -> usize {
    text.char_indices()
        .nth(column - 1)
        .map(|(i, _)| i)
        .unwrap_or(text.len())
}

enum Prior {
    Product(Vec<f64>),
    Table(Vec<f64>),
}

#[derive(Default)]
struct Costs {
    uniform: Option<(usize, f64)>,
    per_action: BTreeMap<Action, f64>,
    first_action_line: Option<usize>,
}

/// Parses a scenario. `states` may appear on any line; every other
/// declaration is checked against it.
pub fn parse_scenario(text: &str) -> Result<ScenarioDoc> {
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| Line::new(i + 1, raw))
        .filter(|l| !l.words.is_empty())
        .collect();

    let mut states: Option<(usize, usize)> = None;
    for line in lines.iter().filter(|l| l.keyword().text == "states") {
        if let Some((first, _)) = states {
            return Err(line.error(1, format!("duplicate states declaration (first on line {first})")));
        }
        let args = line.expect_args(1, 1, "states <s>")?;
        let s = line.integer(args[0])?;
        if s == 0 || s > crate::MAX_STATES {
            return Err(line.error(
                args[0].column,
                format!("state count {s} outside 1..={}", crate::MAX_STATES),
            ));
        }
        states = Some((line.number, s));
    }
    let Some((_, s)) = states else {
        return Err(Error::parse(1, 1, "missing states declaration"));
    };

    let mut prior: Option<(usize, Prior)> = None;
    let mut outcome: Option<(usize, String, BoolFn)> = None;
    let mut measurements: Vec<BoolFn> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut costs = Costs::default();
    let mut utility: Option<(usize, Utility)> = None;
    let mut budget: Option<(usize, usize)> = None;
    let mut sweep: Option<(usize, SweepDefaults)> = None;

    let duplicate = |line: &Line<'_>, what: &str, first: usize| {
        line.error(1, format!("duplicate {what} declaration (first on line {first})"))
    };

    for line in &lines {
        let kw = line.keyword();
        match kw.text {
            "states" => {}
            "prior" => {
                if let Some((first, _)) = prior {
                    return Err(duplicate(line, "prior", first));
                }
                let kind = line.words.get(1).copied().ok_or_else(|| {
                    line.error(line.end_column(), "expected 'product' or 'table'")
                })?;
                let (count, usage) = match kind.text {
                    "product" => (s, "prior product <Pr(X1=1)> ... <Pr(Xs=1)>"),
                    "table" => (1usize << s, "prior table <2^s probabilities>"),
                    other => {
                        return Err(line.error(
                            kind.column,
                            format!("expected 'product' or 'table', found '{other}'"),
                        ))
                    }
                };
                let args = line.expect_args(2, count, usage)?;
                let values = args
                    .iter()
                    .map(|&w| line.number(w))
                    .collect::<Result<Vec<f64>>>()?;
                if kind.text == "product" {
                    if let Some((i, _)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                        return Err(line.error(args[i].column, "probability must lie in [0, 1]"));
                    }
                    prior = Some((line.number, Prior::Product(values)));
                } else {
                    prior = Some((line.number, Prior::Table(values)));
                }
            }
            "outcome" => {
                if let Some((first, ..)) = outcome {
                    return Err(duplicate(line, "outcome", first));
                }
                let (name, expr, col) = line.binding()?;
                let e = parse_expr_at(expr, line.number, col, Some(s))?;
                let f = compile_expr(&e, s)?.with_name(name.text);
                outcome = Some((line.number, name.text.to_string(), f));
            }
            "measure" => {
                let (name, expr, col) = line.binding()?;
                if name.text == BASELINE {
                    return Err(line.error(name.column, format!("'{BASELINE}' is a reserved name")));
                }
                if names.iter().any(|n| n == name.text) {
                    return Err(line.error(name.column, format!("duplicate measurement name {}", name.text)));
                }
                let e = parse_expr_at(expr, line.number, col, Some(s))?;
                measurements.push(compile_expr(&e, s)?.with_name(name.text));
                names.push(name.text.to_string());
            }
            "cost" => {
                let kind = line.words.get(1).copied().ok_or_else(|| {
                    line.error(line.end_column(), "expected 'set' or 'action'")
                })?;
                match kind.text {
                    "set" => {
                        if let Some((first, _)) = costs.uniform {
                            return Err(duplicate(line, "cost set", first));
                        }
                        if let Some(first) = costs.first_action_line {
                            return Err(line.error(
                                kind.column,
                                format!("cannot mix 'cost set' with 'cost action' (line {first})"),
                            ));
                        }
                        let args = line.expect_args(2, 1, "cost set <c>")?;
                        let c = line.number(args[0])?;
                        if c < 0.0 {
                            return Err(line.error(args[0].column, "cost must be >= 0"));
                        }
                        costs.uniform = Some((line.number, c));
                    }
                    "action" => {
                        if let Some((first, _)) = costs.uniform {
                            return Err(line.error(
                                kind.column,
                                format!("cannot mix 'cost action' with 'cost set' (line {first})"),
                            ));
                        }
                        let args = line.expect_args(2, 3, "cost action <i> <0|1> <c>")?;
                        let i = line.integer(args[0])?;
                        if i == 0 || i > s {
                            return Err(line.error(args[0].column, format!("state index {i} outside 1..={s}")));
                        }
                        let x = match args[1].text {
                            "0" => false,
                            "1" => true,
                            other => {
                                return Err(line.error(args[1].column, format!("expected 0 or 1, found '{other}'")))
                            }
                        };
                        let c = line.number(args[2])?;
                        if c < 0.0 {
                            return Err(line.error(args[2].column, "cost must be >= 0"));
                        }
                        let act = Action::set(i, x);
                        if costs.per_action.insert(act, c).is_some() {
                            return Err(line.error(kw.column, format!("duplicate cost for {act}")));
                        }
                        costs.first_action_line.get_or_insert(line.number);
                    }
                    other => {
                        return Err(line.error(
                            kind.column,
                            format!("expected 'set' or 'action', found '{other}'"),
                        ))
                    }
                }
            }
            "utility" => {
                if let Some((first, _)) = utility {
                    return Err(duplicate(line, "utility", first));
                }
                let args = line.expect_args(1, 2, "utility <u0> <u1>")?;
                let u0 = line.number(args[0])?;
                let u1 = line.number(args[1])?;
                let u = Utility::new(u0, u1).map_err(|e| line.error(args[1].column, e.to_string()))?;
                utility = Some((line.number, u));
            }
            "budget" => {
                if let Some((first, _)) = budget {
                    return Err(duplicate(line, "budget", first));
                }
                let args = line.expect_args(1, 1, "budget <B>")?;
                let b = line.integer(args[0])?;
                if b == 0 {
                    return Err(line.error(args[0].column, "budget must be at least 1"));
                }
                budget = Some((line.number, b));
            }
            "sweep" => {
                if let Some((first, _)) = sweep {
                    return Err(duplicate(line, "sweep", first));
                }
                let args = line.expect_args(1, 3, "sweep <min> <max> <steps>")?;
                let min = line.number(args[0])?;
                let max = line.number(args[1])?;
                let steps = line.integer(args[2])?;
                crate::sweep::cost_grid(min, max, steps)
                    .map_err(|e| line.error(args[0].column, e.to_string()))?;
                sweep = Some((line.number, SweepDefaults { min, max, steps }));
            }
            other => {
                return Err(line.error(kw.column, format!("unknown declaration '{other}'")));
            }
        }
    }

    let end = |line: usize, column: usize, message: String| Error::parse(line, column, message);
    let last_line = text.lines().count().max(1);
    let (prior_line, prior) = prior.ok_or_else(|| end(last_line, 1, "missing prior declaration".to_string()))?;
    let dist = match prior {
        Prior::Product(p) => JointDist::product(&p),
        Prior::Table(t) => JointDist::new(s, t),
    }
    .map_err(|e| Error::parse(prior_line, 1, e.to_string()))?;
    let (_, outcome_name, outcome) =
        outcome.ok_or_else(|| end(last_line, 1, "missing outcome declaration".to_string()))?;
    let cost_model = match (costs.uniform, costs.first_action_line) {
        (Some((line, c)), _) => CostModel::uniform(c).map_err(|e| end(line, 1, e.to_string()))?,
        (None, Some(line)) => {
            CostModel::per_action(costs.per_action).map_err(|e| end(line, 1, e.to_string()))?
        }
        (None, None) => return Err(end(last_line, 1, "missing cost declaration".to_string())),
    };
    let model = Model::new(
        dist,
        outcome,
        measurements,
        cost_model,
        utility.map(|u| u.1).unwrap_or_default(),
        budget.map(|b| b.1).unwrap_or(1),
    )?;
    Ok(ScenarioDoc {
        source: text.to_string(),
        model,
        outcome_name,
        names,
        sweep: sweep.map(|s| s.1),
    })
}
