//! Egg-box pictures of `M_n(𝔹)`: each `D`-class drawn as a grid whose rows
//! are `R`-classes, columns are `L`-classes and cells are `H`-classes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{factor_rank, GreenRelation};
use crate::linear_maps::relation_table;
use crate::matrix::Matrix;

/// Largest `n` for which the egg-box is computed.
pub const MAX_EGGBOX_N: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EggBoxFormat {
    Json,
    Dot,
}

impl FromStr for EggBoxFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(EggBoxFormat::Json),
            "dot" => Ok(EggBoxFormat::Dot),
            _ => Err(Error::Parse(format!("unknown egg-box format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HCell {
    /// Index of the `R`-class within its `D`-class.
    pub r: usize,
    /// Index of the `L`-class within its `D`-class.
    pub l: usize,
    /// Boolean indices of the members, ascending.
    pub members: Vec<u32>,
    pub representative: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DClass {
    pub rank: usize,
    pub size: usize,
    pub r_classes: usize,
    pub l_classes: usize,
    pub cells: Vec<HCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EggBox {
    pub n: usize,
    pub d_classes: Vec<DClass>,
}

/// Class labels for an equivalence table, numbered by least member.
fn classes(labels_of: impl Fn(u32, u32) -> bool, size: u32) -> Vec<usize> {
    let mut label = vec![usize::MAX; size as usize];
    let mut next = 0;
    for a in 0..size {
        if label[a as usize] != usize::MAX {
            continue;
        }
        for b in a..size {
            if label[b as usize] == usize::MAX && labels_of(a, b) {
                label[b as usize] = next;
            }
        }
        next += 1;
    }
    label
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut x = x;
    while parent[x] != root {
        let up = parent[x];
        parent[x] = root;
        x = up;
    }
    root
}

/// `D` as the smallest equivalence containing `L` and `R`.
pub(crate) fn d_labels(l: &[usize], r: &[usize]) -> Vec<usize> {
    let size = l.len();
    let mut parent: Vec<usize> = (0..size).collect();
    let mut first_l = vec![usize::MAX; size];
    let mut first_r = vec![usize::MAX; size];
    for x in 0..size {
        for (first, class) in [(&mut first_l, l[x]), (&mut first_r, r[x])] {
            if first[class] == usize::MAX {
                first[class] = x;
            } else {
                let (a, b) = (find(&mut parent, first[class]), find(&mut parent, x));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // relabel by least member
    let mut by_root = vec![usize::MAX; size];
    let mut next = 0;
    (0..size)
        .map(|x| {
            let root = find(&mut parent, x);
            if by_root[root] == usize::MAX {
                by_root[root] = next;
                next += 1;
            }
            by_root[root]
        })
        .collect()
}

pub fn eggbox(n: usize) -> Result<EggBox> {
    if n == 0 || n > MAX_EGGBOX_N {
        return Err(Error::UnsupportedParams(format!("egg-boxes need 1 <= n <= {MAX_EGGBOX_N}, got {n}")));
    }
    let size = 1u32 << (n * n);
    let lt = relation_table(n, GreenRelation::L)?;
    let rt = relation_table(n, GreenRelation::R)?;
    let l = classes(|a, b| lt.holds(a, b), size);
    let r = classes(|a, b| rt.holds(a, b), size);
    let d = d_labels(&l, &r);
    let d_count = d.iter().max().map_or(0, |m| m + 1);
    let mut d_classes = Vec::with_capacity(d_count);
    for class in 0..d_count {
        let members: Vec<u32> = (0..size).filter(|&x| d[x as usize] == class).collect();
        // local numbering of R- and L-classes by least member
        let mut r_ids: Vec<usize> = Vec::new();
        let mut l_ids: Vec<usize> = Vec::new();
        for &x in &members {
            if !r_ids.contains(&r[x as usize]) {
                r_ids.push(r[x as usize]);
            }
            if !l_ids.contains(&l[x as usize]) {
                l_ids.push(l[x as usize]);
            }
        }
        let mut cells: Vec<HCell> = Vec::new();
        for &x in &members {
            let ri = r_ids.iter().position(|&c| c == r[x as usize]).unwrap();
            let li = l_ids.iter().position(|&c| c == l[x as usize]).unwrap();
            match cells.iter_mut().find(|c| c.r == ri && c.l == li) {
                Some(c) => c.members.push(x),
                None => cells.push(HCell {
                    r: ri,
                    l: li,
                    members: vec![x],
                    representative: Matrix::boolean_from_index(n, x),
                }),
            }
        }
        cells.sort_by_key(|c| (c.r, c.l));
        let rank = factor_rank(&Matrix::boolean_from_index(n, members[0]))?.value;
        d_classes.push(DClass {
            rank,
            size: members.len(),
            r_classes: r_ids.len(),
            l_classes: l_ids.len(),
            cells,
        });
    }
    Ok(EggBox { n, d_classes })
}

impl EggBox {
    pub fn render(&self, format: EggBoxFormat) -> String {
        match format {
            EggBoxFormat::Json => serde_json::to_string_pretty(self).expect("egg-boxes serialize") + "\n",
            EggBoxFormat::Dot => self.to_dot(),
        }
    }

    fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph eggbox_{} {{", self.n);
        let _ = writeln!(out, "  node [shape=box];");
        for (k, d) in self.d_classes.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_d{k} {{");
            let _ = writeln!(out, "    label=\"D_{k} rank={} size={}\";", d.rank, d.size);
            for c in &d.cells {
                let _ = writeln!(
                    out,
                    "    d{k}_r{}_l{} [label=\"R_{},L_{},rank={},size={}\"];",
                    c.r,
                    c.l,
                    c.r,
                    c.l,
                    d.rank,
                    c.members.len()
                );
            }
            let _ = writeln!(out, "  }}");
        }
        out.push_str("}\n");
        out
    }
}
