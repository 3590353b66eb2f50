//! Text forms of values, sums, entailing trees and graph files.
//!
//! ```text
//! value := "0" | "*" | "*" INT | "moon" | "sp(" INT ")" | "inf{" [INT ("," INT)*] "}"
//! tree  := "inf" | "~inf" | "{" trees "|" trees "}" | "0" | "*" [INT]
//! sum   := [term ("+" term)*]
//! term  := value | "tree:" tree | "graph:" NAME "@" NODE
//! ```
//!
//! Whitespace between tokens is ignored. Nimber shorthands inside trees
//! expand to the canonical `*k` built on `{~inf | inf}`.

use std::collections::BTreeSet;
use std::fmt;

use crate::entailing::{Forest, TreeId, TreeNode};
use crate::error::{ParseError, ParseErrorKind};
use crate::loopy::LoopyGraph;
use crate::value::GameValue;

const INT_MAX: u64 = i32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Value(GameValue),
    Graph { name: String, node: String },
    Tree(TreeId),
}

/// A disjunctive sum as written, terms in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SumExpr {
    pub terms: Vec<Term>,
}

impl SumExpr {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    }

    fn error(&mut self, expected: &str) -> ParseError {
        let found = self.found();
        ParseError::new(
            self.pos,
            ParseErrorKind::Unexpected {
                expected: expected.to_string(),
                found,
            },
        )
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("`{token}`")))
        }
    }

    /// Eats `word` only when it is not followed by another identifier char.
    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(word)
            && !rest[word.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn peek_digit(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.error("integer"));
        }
        let mut value: u64 = 0;
        for b in self.text[start..start + digits].bytes() {
            value = value * 10 + u64::from(b - b'0');
            if value > INT_MAX {
                return Err(ParseError::new(start, ParseErrorKind::IntegerOverflow));
            }
        }
        self.pos += digits;
        Ok(value as u32)
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let len = self
            .rest()
            .chars()
            .take_while(|&c| is_name_char(c))
            .map(char::len_utf8)
            .sum::<usize>();
        if len == 0 {
            return Err(self.error("name"));
        }
        let name = self.rest()[..len].to_string();
        self.pos += len;
        Ok(name)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\'')
}

fn value(cur: &mut Cursor) -> Result<GameValue, ParseError> {
    if cur.eat("*") {
        let k = if cur.peek_digit() { cur.int()? } else { 1 };
        return Ok(GameValue::Nimber(k));
    }
    if cur.peek_digit() {
        let start = cur.pos;
        let k = cur.int()?;
        if k != 0 {
            cur.pos = start;
            return Err(cur.error("value (bare integers other than 0 are not values)"));
        }
        return Ok(GameValue::Nimber(0));
    }
    if cur.eat_word("moon") {
        return Ok(GameValue::Moon);
    }
    if cur.eat_word("sp") {
        cur.expect("(")?;
        let n = cur.int()?;
        cur.expect(")")?;
        return Ok(GameValue::SpecialMoon(n));
    }
    if cur.eat_word("inf") {
        cur.expect("{")?;
        let mut set = BTreeSet::new();
        if !cur.eat("}") {
            loop {
                set.insert(cur.int()?);
                if cur.eat("}") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        return Ok(GameValue::Inf(set));
    }
    Err(cur.error("value"))
}

fn tree(cur: &mut Cursor, forest: &mut Forest) -> Result<TreeId, ParseError> {
    if cur.eat("~") {
        if cur.eat_word("inf") {
            return Ok(forest.coinf());
        }
        return Err(cur.error("`inf` after `~`"));
    }
    if cur.eat_word("inf") {
        return Ok(forest.inf());
    }
    if cur.eat("*") {
        let k = if cur.peek_digit() { cur.int()? } else { 1 };
        return Ok(forest.nimber(k));
    }
    if cur.peek_digit() {
        let start = cur.pos;
        if cur.int()? == 0 {
            return Ok(forest.zero());
        }
        cur.pos = start;
        return Err(cur.error("tree"));
    }
    let open = {
        cur.skip_ws();
        cur.pos
    };
    if !cur.eat("{") {
        return Err(cur.error("tree"));
    }
    let left = tree_list(cur, forest, "|")?;
    cur.expect("|")?;
    let right = tree_list(cur, forest, "}")?;
    cur.expect("}")?;
    if left.is_empty() && right.is_empty() {
        return Err(ParseError::new(open, ParseErrorKind::EmptyNode));
    }
    Ok(forest.node(left, right))
}

fn tree_list(
    cur: &mut Cursor,
    forest: &mut Forest,
    close: &str,
) -> Result<Vec<TreeId>, ParseError> {
    let mut items = Vec::new();
    if cur.peek().is_some_and(|c| close.starts_with(c)) {
        return Ok(items);
    }
    loop {
        items.push(tree(cur, forest)?);
        if !cur.eat(",") {
            return Ok(items);
        }
    }
}

fn term(cur: &mut Cursor, forest: &mut Forest) -> Result<Term, ParseError> {
    if cur.eat_word("tree") {
        cur.expect(":")?;
        return Ok(Term::Tree(tree(cur, forest)?));
    }
    if cur.eat_word("graph") {
        cur.expect(":")?;
        let name = cur.name()?;
        cur.expect("@")?;
        let node = cur.name()?;
        return Ok(Term::Graph { name, node });
    }
    Ok(Term::Value(value(cur)?))
}

/// Parses a single value literal such as `*3`, `sp(2)` or `inf{0,1}`.
pub fn parse_value(text: &str) -> Result<GameValue, ParseError> {
    let mut cur = Cursor::new(text);
    let v = value(&mut cur)?;
    cur.finish()?;
    Ok(v)
}

/// Parses a tree literal, interning it in `forest`.
pub fn parse_tree(text: &str, forest: &mut Forest) -> Result<TreeId, ParseError> {
    let mut cur = Cursor::new(text);
    let t = tree(&mut cur, forest)?;
    cur.finish()?;
    Ok(t)
}

/// Parses a `+`-separated sum. Graph references are kept by name and
/// resolved when the sum is evaluated.
pub fn parse_sum(text: &str, forest: &mut Forest) -> Result<SumExpr, ParseError> {
    let mut cur = Cursor::new(text);
    let mut terms = Vec::new();
    if !cur.at_end() {
        loop {
            terms.push(term(&mut cur, forest)?);
            if !cur.eat("+") {
                break;
            }
        }
    }
    cur.finish()?;
    Ok(SumExpr { terms })
}

/// Parses a graph file: one `NODE: OPTION*` line per node, one
/// `start: NODE` line, `#` comments. Nodes are indexed in definition order.
pub fn parse_graph(text: &str) -> Result<LoopyGraph, ParseError> {
    struct Def {
        name: String,
        targets: Vec<(String, usize)>,
    }

    let mut defs: Vec<Def> = Vec::new();
    let mut start: Option<(String, usize)> = None;
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_offset = offset;
        offset += raw.len();
        let content = raw.split('#').next().unwrap_or("");
        let content = content.trim_end_matches(['\n', '\r']);
        let mut cur = Cursor::new(content);
        if cur.at_end() {
            continue;
        }
        let name_offset = line_offset + cur.pos;
        let name = cur.name().map_err(|e| shift(e, line_offset))?;
        cur.expect(":").map_err(|e| shift(e, line_offset))?;
        let mut targets = Vec::new();
        while !cur.at_end() {
            let at = line_offset + cur.pos;
            let t = cur.name().map_err(|e| shift(e, line_offset))?;
            targets.push((t, at));
        }
        if name == "start" {
            if start.is_some() {
                return Err(ParseError::new(name_offset, ParseErrorKind::DuplicateStart));
            }
            if targets.len() != 1 {
                let at = targets.get(1).map_or(offset, |t| t.1);
                return Err(ParseError::new(
                    at,
                    ParseErrorKind::Unexpected {
                        expected: "exactly one start node".into(),
                        found: format!("{} names", targets.len()),
                    },
                ));
            }
            start = targets.pop();
            continue;
        }
        if defs.iter().any(|d| d.name == name) {
            return Err(ParseError::new(name_offset, ParseErrorKind::DuplicateNode(name)));
        }
        defs.push(Def { name, targets });
    }
    let lookup = |name: &str, at: usize| {
        defs.iter()
            .position(|d| d.name == name)
            .ok_or_else(|| ParseError::new(at, ParseErrorKind::UndefinedNode(name.to_string())))
    };
    let mut options = Vec::with_capacity(defs.len());
    for d in &defs {
        let opts = d
            .targets
            .iter()
            .map(|(t, at)| lookup(t, *at))
            .collect::<Result<Vec<_>, _>>()?;
        options.push(opts);
    }
    let (start_name, start_at) =
        start.ok_or_else(|| ParseError::new(text.len(), ParseErrorKind::MissingStart))?;
    let start = lookup(&start_name, start_at)?;
    let names = defs.into_iter().map(|d| d.name).collect();
    Ok(LoopyGraph::new(names, options, start))
}

fn shift(mut e: ParseError, by: usize) -> ParseError {
    e.offset += by;
    e
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::Nimber(0) => f.write_str("0"),
            GameValue::Nimber(1) => f.write_str("*"),
            GameValue::Nimber(k) => write!(f, "*{k}"),
            GameValue::Moon => f.write_str("moon"),
            GameValue::SpecialMoon(n) => write!(f, "sp({n})"),
            GameValue::Inf(set) => {
                f.write_str("inf{")?;
                for (i, a) in set.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
        }
    }
}

pub fn print_value(value: &GameValue) -> String {
    value.to_string()
}

/// Writes a tree in the literal grammar, options in forest order.
pub fn print_tree(forest: &Forest, id: TreeId) -> String {
    let mut out = String::new();
    write_tree(forest, id, &mut out);
    out
}

fn write_tree(forest: &Forest, id: TreeId, out: &mut String) {
    match forest.get(id) {
        TreeNode::Inf => out.push_str("inf"),
        TreeNode::CoInf => out.push_str("~inf"),
        TreeNode::Pos { left, right } => {
            out.push('{');
            for (i, &l) in left.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_tree(forest, l, out);
            }
            out.push_str(" | ");
            for (i, &r) in right.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_tree(forest, r, out);
            }
            out.push('}');
        }
    }
}

pub fn print_sum(sum: &SumExpr, forest: &Forest) -> String {
    sum.terms
        .iter()
        .map(|t| match t {
            Term::Value(v) => v.to_string(),
            Term::Graph { name, node } => format!("graph:{name}@{node}"),
            Term::Tree(id) => format!("tree:{}", print_tree(forest, *id)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn print_graph(graph: &LoopyGraph) -> String {
    let mut out = String::new();
    for v in 0..graph.len() {
        out.push_str(graph.name(v));
        out.push(':');
        for &o in graph.options(v) {
            out.push(' ');
            out.push_str(graph.name(o));
        }
        out.push('\n');
    }
    out.push_str("start: ");
    out.push_str(graph.name(graph.start()));
    out.push('\n');
    out
}
