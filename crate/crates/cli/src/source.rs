//! Graph input: graph6 strings, graph6 files, or named constructors.

use std::path::PathBuf;

use clap::Args;
use qextremal::graph::{self, Graph, Lemma24Variant};
use qextremal::graph6;
use serde::Serialize;

/// Constructor parameters shared by `construct` and the `--construct` flag.
#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct Params {
    /// Order of the graph.
    #[arg(long)]
    pub n: Option<usize>,
    /// Clique / join size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Left part of a complete bipartite graph.
    #[arg(long)]
    pub a: Option<usize>,
    /// Right part of a complete bipartite graph.
    #[arg(long)]
    pub b: Option<usize>,
    /// Variant for `lemma24`: plus, p, m.
    #[arg(long)]
    pub variant: Option<Lemma24Variant>,
}

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct Source {
    /// Input graph as a graph6 string.
    #[arg(long, group = "source")]
    pub graph6: Option<String>,
    /// File holding one graph6 line.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Named constructor: S, S+, K, P, C, star, Kab, lemma24.
    #[arg(long, group = "source")]
    pub construct: Option<String>,
    #[command(flatten)]
    pub params: Params,
}

/// Constructor families accepted by `--construct` and `construct`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    S,
    SPlus,
    Complete,
    Path,
    Cycle,
    Star,
    Bipartite,
    Lemma24,
}

impl Family {
    pub fn parse(name: &str) -> Result<Family, String> {
        Ok(match name {
            "S" | "s" => Family::S,
            "S+" | "s+" | "splus" => Family::SPlus,
            "K" | "complete" => Family::Complete,
            "P" | "path" => Family::Path,
            "C" | "cycle" => Family::Cycle,
            "star" => Family::Star,
            "Kab" | "bipartite" => Family::Bipartite,
            "lemma24" => Family::Lemma24,
            other => {
                return Err(format!(
                    "unknown constructor '{other}' (expected S, S+, K, P, C, star, Kab, lemma24)"
                ))
            }
        })
    }
}

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize, String> {
    v.ok_or_else(|| format!("constructor {family} needs --{flag}"))
}

pub fn construct(name: &str, p: &Params) -> Result<Graph, String> {
    let family = Family::parse(name)?;
    let built = match family {
        Family::S => graph::make_s(need(p.n, "n", name)?, need(p.k, "k", name)?),
        Family::SPlus => graph::make_s_plus(need(p.n, "n", name)?, need(p.k, "k", name)?),
        Family::Complete => graph::make_complete(need(p.n, "n", name)?),
        Family::Path => graph::make_path(need(p.n, "n", name)?),
        Family::Cycle => graph::make_cycle(need(p.n, "n", name)?),
        Family::Star => {
            let n = need(p.n, "n", name)?;
            if n < 2 {
                return Err(format!("constructor star: --n must be at least 2, got {n}"));
            }
            graph::make_star(n - 1)
        }
        Family::Bipartite => graph::make_complete_bipartite(need(p.a, "a", name)?, need(p.b, "b", name)?),
        Family::Lemma24 => {
            let variant = p.variant.ok_or_else(|| "constructor lemma24 needs --variant".to_string())?;
            graph::make_lemma24_graph(need(p.k, "k", name)?, variant)
        }
    };
    built.map_err(|e| format!("constructor {name}: {e}"))
}

pub fn decode(s: &str, origin: &str) -> Result<Graph, String> {
    graph6::decode(s.trim()).map_err(|e| format!("{origin}: invalid graph6 '{}': {e}", s.trim()))
}

impl Source {
    pub fn is_given(&self) -> bool {
        self.graph6.is_some() || self.input.is_some() || self.construct.is_some()
    }

    pub fn load(&self) -> Result<Graph, String> {
        if let Some(s) = &self.graph6 {
            return decode(s, "--graph6");
        }
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path).map_err(|e| format!("--input {}: {e}", path.display()))?;
            // Skips blank lines and `#` header lines written by this tool.
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
                .unwrap_or("");
            return decode(line, &format!("--input {}", path.display()));
        }
        if let Some(name) = &self.construct {
            return construct(name, &self.params);
        }
        Err("no input graph: pass --graph6, --input or --construct".into())
    }

    /// `(k, closed-form q)` when the input is `S(n,k)` or `S+(n,k)`.
    pub fn closed_form(&self) -> Option<(usize, f64)> {
        let family = Family::parse(self.construct.as_deref()?).ok()?;
        let (n, k) = (self.params.n?, self.params.k?);
        let q = match family {
            Family::S => qextremal::spectra::q_s_closed(n, k).ok()?,
            Family::SPlus => qextremal::spectra::q_s_plus_closed(n, k).ok()?,
            _ => return None,
        };
        Some((k, q))
    }
}
