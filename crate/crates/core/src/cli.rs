//! Command-line interface. Every output starts with a versioned header: a
//! `# thomp-<kind> v1` line for text, `format` and `version` fields for JSON.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::action::WordClass;
use crate::coloring::{dehn_colorings, determinant, DehnColoring};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::fp::{membership_report, ord2};
use crate::group::{evaluate_word, phi_q, unphi_q, GroupWord, TreeDiagram};
use crate::links::{link_of, Convention, LinkDiagram};
use crate::random::{sample_rng, MemberSampler};
use crate::svg;

pub const VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "thomp", version, about = "Elements of F(n), the subgroups F_p, and their links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkFormat {
    Pd,
    Svg,
    Json,
}

/// ELEMENT arguments accept a fixture name, element text such as
/// `((..).)|(.(..))`, element JSON, or a path to a file holding either.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the reduced form of an element.
    Reduce {
        element: String,
        /// Arity for inputs whose trees are both single leaves.
        #[arg(short = 'n', long, default_value_t = 2)]
        arity: u32,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Multiply two elements, left one first.
    Mul {
        left: String,
        right: String,
        #[arg(short = 'n', long, default_value_t = 2)]
        arity: u32,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Invert an element.
    Inv {
        element: String,
        #[arg(short = 'n', long, default_value_t = 2)]
        arity: u32,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Evaluate a word such as "x0 x1^-1 x0^2" in the generators of F(n).
    Eval {
        word: String,
        #[arg(short = 'n', long, default_value_t = 2)]
        arity: u32,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Decide membership in F_p. Exit status 1 for non-members.
    Member {
        element: String,
        #[arg(short = 'p', long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Map an element of F(2^q) into F.
    Embed {
        element: String,
        #[arg(short = 'q', long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Recover the element of F(2^q) mapping to a given element of F.
    /// Exit status 1 when there is none.
    Factor {
        element: String,
        #[arg(short = 'q', long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Build the link diagram of an element.
    Link {
        element: String,
        #[arg(long, value_enum, default_value_t = LinkFormat::Pd)]
        format: LinkFormat,
        #[arg(long)]
        allow_nonreduced: bool,
    },
    /// Count Dehn p-colorings of an element's link or of a PD code.
    /// Exit status 1 when only trivial colorings exist.
    Color {
        target: String,
        #[arg(short = 'p', long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
        #[arg(long)]
        allow_nonreduced: bool,
    },
    /// Sample members of F_p and tabulate their links.
    Census {
        #[arg(short = 'p', long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum word length in the generators of F_p.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = ElementFormat::Text)]
        format: ElementFormat,
    },
    /// Print a named fixture, or list the names.
    Fixture { name: Option<String> },
}

/// Output text and exit status of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

/// Exit status for an error: 1 for a negative answer, 2 for bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotInSubgroup(_) => 1,
        _ => 2,
    }
}

enum Input {
    Element(TreeDiagram),
    Link(LinkDiagram),
}

fn strip_headers(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn header_arity(text: &str) -> Option<u32> {
    let header = text.lines().find(|l| l.starts_with("# thomp-element"))?;
    header.split_whitespace().find_map(|w| w.strip_prefix("n=")?.parse().ok())
}

fn parse_input(raw: &str, arity: u32) -> Result<Input> {
    if let Ok(f) = fixtures::load(raw) {
        return Ok(match f {
            fixtures::Fixture::Element(d) => Input::Element(d),
            fixtures::Fixture::Link(l) => Input::Link(l),
        });
    }
    let text = if raw.contains('|') || raw.contains("PD[") || raw.trim_start().starts_with('{') {
        raw.to_string()
    } else if Path::new(raw).is_file() {
        std::fs::read_to_string(raw)
            .map_err(|e| Error::parse(0, format!("cannot read {raw}: {e}")))?
    } else {
        return Err(Error::parse(
            0,
            format!("'{raw}' is not a fixture, element, PD code or readable file"),
        ));
    };
    if text.contains("PD[") {
        return LinkDiagram::parse_pd(&text).map(Input::Link);
    }
    let arity = header_arity(&text).unwrap_or(arity);
    let body = strip_headers(&text);
    let body = body.trim();
    if body.starts_with('{') {
        let j: crate::group::DiagramJson = serde_json::from_str(body)
            .map_err(|e| Error::parse(e.column().saturating_sub(1), e.to_string()))?;
        return TreeDiagram::from_json(&j).map(Input::Element);
    }
    TreeDiagram::parse(body, arity).map(Input::Element)
}

fn element(raw: &str, arity: u32) -> Result<TreeDiagram> {
    match parse_input(raw, arity)? {
        Input::Element(d) => Ok(d),
        Input::Link(_) => Err(Error::parse(0, "expected an element, got a PD code")),
    }
}

fn show_element(d: &TreeDiagram, format: ElementFormat) -> String {
    match format {
        ElementFormat::Text => format!("# thomp-element v{VERSION} n={}\n{d}\n", d.arity()),
        ElementFormat::Json => {
            let j = json!({
                "format": "thomp-element",
                "version": VERSION,
                "n": d.arity(),
                "domain": d.domain().to_string(),
                "range": d.range().to_string(),
            });
            format!("{j}\n")
        }
    }
}

fn faces_json(c: &DehnColoring) -> String {
    let parts: Vec<String> = c
        .faces
        .iter()
        .enumerate()
        .map(|(f, r)| format!("\"{f}\":{r}"))
        .collect();
    format!("{{{}}}", parts.join(","))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Reduce {
            element: e,
            arity,
            format,
        } => Ok(Outcome::ok(show_element(&element(e, *arity)?.reduce(), *format))),
        Command::Mul {
            left,
            right,
            arity,
            format,
        } => {
            let d = element(left, *arity)?.multiply(&element(right, *arity)?)?;
            Ok(Outcome::ok(show_element(&d, *format)))
        }
        Command::Inv {
            element: e,
            arity,
            format,
        } => Ok(Outcome::ok(show_element(
            &element(e, *arity)?.inverse().reduce(),
            *format,
        ))),
        Command::Eval {
            word,
            arity,
            format,
        } => {
            let d = evaluate_word(&GroupWord::parse(word, *arity)?)?;
            Ok(Outcome::ok(show_element(&d, *format)))
        }
        Command::Member { element: e, p, format } => member(&element(e, 2)?, *p, *format),
        Command::Embed { element: e, q, format } => {
            let d = element(e, 1u32.checked_shl(*q).unwrap_or(0))?;
            Ok(Outcome::ok(show_element(&phi_q(&d, *q)?.reduce(), *format)))
        }
        Command::Factor { element: e, q, format } => {
            let d = unphi_q(&element(e, 2)?, *q)?;
            Ok(Outcome::ok(show_element(&d, *format)))
        }
        Command::Link {
            element: e,
            format,
            allow_nonreduced,
        } => {
            let d = element(e, 2)?;
            let out = match format {
                LinkFormat::Svg => svg::render(&d, Convention::STANDARD, *allow_nonreduced)?,
                LinkFormat::Pd => {
                    let l = link_of(&d, Convention::STANDARD, *allow_nonreduced)?;
                    format!("{}\n", l.pd_code())
                }
                LinkFormat::Json => {
                    let l = link_of(&d, Convention::STANDARD, *allow_nonreduced)?;
                    let pd = l.pd_code();
                    let j = json!({
                        "format": "thomp-link",
                        "version": VERSION,
                        "crossings": l.crossing_count(),
                        "components": l.components(),
                        "pd": pd.lines().last().unwrap_or(""),
                    });
                    format!("{j}\n")
                }
            };
            Ok(Outcome::ok(out))
        }
        Command::Color {
            target,
            p,
            format,
            allow_nonreduced,
        } => {
            let link = match parse_input(target, 2)? {
                Input::Element(d) => link_of(&d, Convention::STANDARD, *allow_nonreduced)?,
                Input::Link(l) => l,
            };
            color(&link, *p, *format)
        }
        Command::Census {
            p,
            count,
            seed,
            max_len,
            format,
        } => census(*p, *count, *seed, *max_len, *format),
        Command::Fixture { name } => match name {
            None => Ok(Outcome::ok(
                fixtures::NAMES.iter().map(|n| format!("{n}\n")).collect(),
            )),
            Some(n) => {
                let t = fixtures::text(n)
                    .ok_or_else(|| Error::parse(0, format!("unknown fixture '{n}'")))?;
                let out = if n == "fig8" {
                    t.to_string()
                } else {
                    format!("# thomp-element v{VERSION} n=2\n{t}\n")
                };
                Ok(Outcome::ok(out))
            }
        },
    }
}

fn member(d: &TreeDiagram, p: u64, format: ElementFormat) -> Result<Outcome> {
    let q = ord2(p)?;
    let r = membership_report(d, p)?;
    let witness = match r.witness_leaf {
        Some(i) => {
            let word = r.domain_leaves[i].clone();
            let pad = (q as usize - word.len() % q as usize) % q as usize;
            let u = WordClass::parse(&format!("{word}{}", "0".repeat(pad)), q)?;
            let image = u.act(d)?;
            let before = u.representative().rho_mod(p)?;
            let after = image.representative().rho_mod(p)?;
            Some((i, u, image, before, after))
        }
        None => None,
    };
    let code = if r.member { 0 } else { 1 };
    let stdout = match format {
        ElementFormat::Text => {
            let mut s = format!("# thomp-member v{VERSION} p={p} q={q}\n");
            let _ = writeln!(s, "leaf\tdomain\trange\trho+\trho-");
            for i in 0..r.domain_leaves.len() {
                let _ = writeln!(
                    s,
                    "{i}\t{}\t{}\t{}\t{}",
                    r.domain_leaves[i], r.range_leaves[i], r.domain_residues[i], r.range_residues[i]
                );
            }
            match &witness {
                None => s.push_str("verdict: member\n"),
                Some((i, u, image, before, after)) => {
                    let _ = writeln!(s, "verdict: not a member");
                    let _ = writeln!(s, "witness leaf: {i}");
                    let _ = writeln!(s, "witness word: {u} (residue {before}) -> {image} (residue {after})");
                }
            }
            s
        }
        ElementFormat::Json => {
            let j = json!({
                "format": "thomp-member",
                "version": VERSION,
                "p": p,
                "q": q,
                "member": r.member,
                "domain_leaves": r.domain_leaves,
                "range_leaves": r.range_leaves,
                "domain_residues": r.domain_residues,
                "range_residues": r.range_residues,
                "witness_leaf": r.witness_leaf,
                "witness_word": witness.as_ref().map(|w| w.1.representative().to_string()),
                "witness_image": witness.as_ref().map(|w| w.2.representative().to_string()),
            });
            format!("{j}\n")
        }
    };
    Ok(Outcome { stdout, code })
}

fn color(link: &LinkDiagram, p: u64, format: ElementFormat) -> Result<Outcome> {
    let sol = dehn_colorings(link, p)?;
    let code = if sol.nontrivial.is_some() { 0 } else { 1 };
    let stdout = match format {
        ElementFormat::Text => {
            let mut s = format!("# thomp-color v{VERSION} p={p}\n");
            let _ = writeln!(s, "crossings: {}", link.crossing_count());
            let _ = writeln!(s, "components: {}", link.components());
            let _ = writeln!(s, "colorings: {}", sol.count);
            match &sol.nontrivial {
                Some(c) => {
                    let _ = writeln!(s, "verdict: nontrivial colorings exist");
                    let _ = writeln!(s, "sample: {}", faces_json(c));
                }
                None => s.push_str("verdict: only trivial colorings\n"),
            }
            s
        }
        ElementFormat::Json => {
            let sample = match &sol.nontrivial {
                Some(c) => faces_json(c),
                None => "null".into(),
            };
            format!(
                "{{\"format\":\"thomp-color\",\"version\":{VERSION},\"p\":{p},\"crossings\":{},\"components\":{},\"colorings\":\"{}\",\"nontrivial\":{},\"sample\":{sample}}}\n",
                link.crossing_count(),
                link.components(),
                sol.count,
                sol.nontrivial.is_some(),
            )
        }
    };
    Ok(Outcome { stdout, code })
}

/// One census row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub index: u64,
    pub carets: usize,
    pub crossings: usize,
    pub components: usize,
    pub colorable: bool,
    pub determinant: String,
}

/// Samples `count` members of `F_p`; sample `i` depends only on `(seed, i)`.
pub fn census_rows(p: u64, count: u64, seed: u64, max_len: usize) -> Result<Vec<CensusRow>> {
    let sampler = MemberSampler::new(p, max_len)?;
    (0..count)
        .into_par_iter()
        .map(|index| {
            let d = sampler.sample(&mut sample_rng(seed, index))?;
            let link = link_of(&d, Convention::STANDARD, false)?;
            Ok(CensusRow {
                index,
                carets: d.size(),
                crossings: link.crossing_count(),
                components: link.components(),
                colorable: dehn_colorings(&link, p)?.nontrivial.is_some(),
                determinant: determinant(&link)?.to_string(),
            })
        })
        .collect()
}

fn census(p: u64, count: u64, seed: u64, max_len: usize, format: ElementFormat) -> Result<Outcome> {
    let rows = census_rows(p, count, seed, max_len)?;
    let colorable = rows.iter().filter(|r| r.colorable).count();
    let mut components: BTreeMap<usize, usize> = BTreeMap::new();
    let mut dets: BTreeMap<(usize, String), usize> = BTreeMap::new();
    for r in &rows {
        *components.entry(r.components).or_default() += 1;
        *dets.entry((r.determinant.len(), r.determinant.clone())).or_default() += 1;
    }
    let stdout = match format {
        ElementFormat::Text => {
            let mut s = format!(
                "# thomp-census v{VERSION} p={p} count={count} seed={seed} max_len={max_len}\n"
            );
            s.push_str("index\tcarets\tcrossings\tcomponents\tcolorable\tdeterminant\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.index,
                    r.carets,
                    r.crossings,
                    r.components,
                    if r.colorable { "yes" } else { "no" },
                    r.determinant
                );
            }
            let _ = writeln!(s, "# colorable {colorable}/{count}");
            let c: Vec<String> = components.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            let _ = writeln!(s, "# components {}", c.join(" "));
            let d: Vec<String> = dets.iter().map(|((_, k), v)| format!("{k}:{v}")).collect();
            let _ = writeln!(s, "# determinants {}", d.join(" "));
            s
        }
        ElementFormat::Json => {
            let samples: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "carets": r.carets,
                        "crossings": r.crossings,
                        "components": r.components,
                        "colorable": r.colorable,
                        "determinant": r.determinant,
                    })
                })
                .collect();
            let hist: Vec<_> = dets
                .iter()
                .map(|((_, k), v)| json!({"determinant": k, "count": v}))
                .collect();
            let comp: Vec<_> = components
                .iter()
                .map(|(k, v)| json!({"components": k, "count": v}))
                .collect();
            let j = json!({
                "format": "thomp-census",
                "version": VERSION,
                "p": p,
                "count": count,
                "seed": seed,
                "max_len": max_len,
                "samples": samples,
                "colorable": colorable,
                "components": comp,
                "determinants": hist,
            });
            format!("{j}\n")
        }
    };
    Ok(Outcome::ok(stdout))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let mut full = vec!["thomp"];
        full.extend_from_slice(args);
        run(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn reduce_prints_header() {
        let o = run_args(&["reduce", "((..).)|((..).)"]).unwrap();
        assert_eq!(o.stdout, "# thomp-element v1 n=2\n.|.\n");
        let o = run_args(&["reduce", "-n", "3", ".|."]).unwrap();
        assert_eq!(o.stdout, "# thomp-element v1 n=3\n.|.\n");
    }

    #[test]
    fn output_reads_back() {
        let o = run_args(&["eval", "x0 x1^-1"]).unwrap();
        let d = element(&o.stdout, 2).unwrap();
        let j = run_args(&["eval", "x0 x1^-1", "--format", "json"]).unwrap();
        assert_eq!(element(&j.stdout, 2).unwrap(), d);
    }

    #[test]
    fn member_exit_codes() {
        assert_eq!(run_args(&["member", "ex3", "-p", "3"]).unwrap().code, 0);
        let o = run_args(&["member", "(.(..))|((..).)", "-p", "3"]).unwrap();
        assert_eq!(o.code, 1);
        assert!(o.stdout.contains("witness word: [10]"));
    }

    #[test]
    fn factor_of_non_member_is_negative() {
        let e = run_args(&["factor", "(.(..))|((..).)", "-q", "2"]).unwrap_err();
        assert_eq!(exit_code(&e), 1);
        let e = run_args(&["member", "garbage", "-p", "3"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn census_is_ordered_and_reproducible() {
        let a = census_rows(3, 6, 4, 3).unwrap();
        let b = census_rows(3, 6, 4, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, r)| r.index == i as u64));
        let empty = run_args(&["census", "-p", "3", "--count", "0"]).unwrap();
        assert_eq!(empty.stdout.lines().count(), 5);
    }
}
