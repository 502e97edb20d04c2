//! Line-oriented `.kgidx` index files.
//!
//! ```text
//! KGIDX 1 <variant> <|V|> <g*> <fingerprint>
//! D <label> <id>                  one per node, ids ascending
//! B <g> <kmax>                    branch header, g ascending
//! L <k> <n> <ids...>              kmax leaf records, k ascending
//! A <k> <g> <d> <n> <ids...>      aux depth sets of branch g, (k, d) ascending
//! S <g> <n> <sizes...>            core-size table, after all branches
//! ```
//!
//! Node sets are written as internal ids in ascending order, so a given tree
//! always serializes to the same bytes. Links are implied by positions and are
//! not stored. Every line, including the last, ends with `\n`.

use std::io::{self, BufRead, Write};

use crate::error::{LoadError, LoadErrorKind};
use crate::hypergraph::{Fingerprint, LabelDict, NodeId};
use crate::index::{AuxNode, Branch, CoreSizeTable, IndexTree, LeafNode, Variant};

pub const MAGIC: &str = "KGIDX";
pub const FORMAT_VERSION: u32 = 1;
pub const FILE_EXTENSION: &str = "kgidx";

pub fn save_index<W: Write>(tree: &IndexTree, sink: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(sink);
    writeln!(
        out,
        "{MAGIC} {FORMAT_VERSION} {} {} {} {}",
        tree.variant(),
        tree.node_count(),
        tree.g_star(),
        tree.fingerprint()
    )?;
    for (i, label) in tree.labels().labels().iter().enumerate() {
        writeln!(out, "D {label} {i}")?;
    }
    for branch in tree.branches() {
        writeln!(out, "B {} {}", branch.g(), branch.k_max())?;
        for (i, leaf) in branch.leaves().iter().enumerate() {
            write!(out, "L {} {}", i + 1, leaf.value().len())?;
            write_ids(&mut out, leaf.value())?;
        }
        for (i, leaf) in branch.leaves().iter().enumerate() {
            let Some(aux) = leaf.aux() else { continue };
            for (d, nodes) in aux.depths() {
                write!(out, "A {} {} {} {}", i + 1, branch.g(), d, nodes.len())?;
                write_ids(&mut out, nodes)?;
            }
        }
    }
    for (i, row) in tree.core_sizes().rows().iter().enumerate() {
        write!(out, "S {} {}", i + 1, row.len())?;
        for s in row {
            write!(out, " {s}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

fn write_ids<W: Write>(out: &mut W, ids: &[NodeId]) -> io::Result<()> {
    for v in ids {
        write!(out, " {v}")?;
    }
    writeln!(out)
}

/// Reads a tree written by [`save_index`]. Any structural problem yields an
/// error carrying the byte offset of the offending line; no partial tree is
/// returned.
pub fn load_index<R: BufRead>(source: R) -> Result<IndexTree, LoadError> {
    Loader::new(source).run()
}

struct Loader<R> {
    source: R,
    line: String,
    offset: u64,
    next_offset: u64,
}

impl<R: BufRead> Loader<R> {
    fn new(source: R) -> Self {
        Self {
            source,
            line: String::new(),
            offset: 0,
            next_offset: 0,
        }
    }

    fn err(&self, kind: LoadErrorKind) -> LoadError {
        LoadError {
            offset: self.offset,
            kind,
        }
    }

    fn malformed(&self, what: impl Into<String>) -> LoadError {
        self.err(LoadErrorKind::Malformed(what.into()))
    }

    /// Advances to the next line. Returns `Ok(false)` at a clean end of file.
    fn advance(&mut self) -> Result<bool, LoadError> {
        self.line.clear();
        self.offset = self.next_offset;
        let n = self
            .source
            .read_line(&mut self.line)
            .map_err(|e| self.err(LoadErrorKind::Io(e)))?;
        if n == 0 {
            return Ok(false);
        }
        self.next_offset += n as u64;
        if !self.line.ends_with('\n') {
            return Err(self.err(LoadErrorKind::Truncated("last line has no newline".into())));
        }
        self.line.pop();
        Ok(true)
    }

    fn expect_line(&mut self, what: &str) -> Result<(), LoadError> {
        if self.advance()? {
            Ok(())
        } else {
            Err(self.err(LoadErrorKind::Truncated(format!("expected {what}"))))
        }
    }

    fn tokens(&self) -> Vec<String> {
        self.line.split(' ').map(str::to_owned).collect()
    }

    fn num<T: std::str::FromStr>(&self, tok: Option<&String>, what: &str) -> Result<T, LoadError> {
        tok.and_then(|t| t.parse().ok())
            .ok_or_else(|| self.malformed(format!("bad {what}")))
    }

    fn ids(&self, toks: &[String], node_count: usize) -> Result<Vec<NodeId>, LoadError> {
        let mut out = Vec::with_capacity(toks.len());
        for t in toks {
            let v: u32 = self.num(Some(t), "node id")?;
            if v as usize >= node_count {
                return Err(self.malformed(format!("node id {v} out of range")));
            }
            if out.last().is_some_and(|&NodeId(p)| p >= v) {
                return Err(self.malformed("node ids not strictly ascending"));
            }
            out.push(NodeId(v));
        }
        Ok(out)
    }

    fn run(mut self) -> Result<IndexTree, LoadError> {
        if !self.advance()? {
            return Err(self.err(LoadErrorKind::Truncated("empty file".into())));
        }
        let head = self.tokens();
        if head.first().map(String::as_str) != Some(MAGIC) {
            return Err(self.err(LoadErrorKind::BadMagic));
        }
        let version: u32 = self.num(head.get(1), "version")?;
        if version != FORMAT_VERSION {
            return Err(self.err(LoadErrorKind::UnsupportedVersion(version)));
        }
        let variant_name = head.get(2).cloned().unwrap_or_default();
        let variant: Variant = variant_name
            .parse()
            .map_err(|_: String| self.err(LoadErrorKind::UnknownVariant(variant_name.clone())))?;
        let node_count: usize = self.num(head.get(3), "node count")?;
        let g_star: u32 = self.num(head.get(4), "g*")?;
        let fingerprint: Fingerprint = self.num(head.get(5), "fingerprint")?;
        if head.len() != 6 {
            return Err(self.malformed("header has extra fields"));
        }

        let mut labels = Vec::with_capacity(node_count);
        for i in 0..node_count {
            self.expect_line("dictionary record")?;
            let t = self.tokens();
            if t.len() != 3 || t[0] != "D" {
                return Err(self.malformed("expected D <label> <id>"));
            }
            let id: usize = self.num(t.get(2), "id")?;
            if id != i {
                return Err(self.malformed(format!("dictionary id {id}, expected {i}")));
            }
            labels.push(t[1].clone());
        }
        let labels = LabelDict::from_labels(labels)
            .map_err(|l| self.malformed(format!("duplicate label {l:?}")))?;

        let mut branches = Vec::with_capacity(g_star as usize);
        let mut pending: Option<String> = None;
        for g in 1..=g_star {
            if pending.take().is_none() {
                self.expect_line("branch record")?;
            }
            let t = self.tokens();
            if t.len() != 3 || t[0] != "B" || self.num::<u32>(t.get(1), "g")? != g {
                return Err(self.malformed(format!("expected B {g} <kmax>")));
            }
            let k_max: u32 = self.num(t.get(2), "kmax")?;
            let mut leaves = Vec::with_capacity(k_max as usize);
            for k in 1..=k_max {
                self.expect_line("leaf record")?;
                let t = self.tokens();
                if t.len() < 3 || t[0] != "L" || self.num::<u32>(t.get(1), "k")? != k {
                    return Err(self.malformed(format!("expected L {k} ...")));
                }
                let n: usize = self.num(t.get(2), "leaf size")?;
                if t.len() != 3 + n {
                    return Err(
                        self.malformed(format!("leaf declares {n} ids, has {}", t.len() - 3))
                    );
                }
                leaves.push(LeafNode::new(self.ids(&t[3..], node_count)?));
            }
            let mut auxes: Vec<AuxNode> = vec![AuxNode::default(); k_max as usize];
            let mut last: Option<(u32, u32)> = None;
            loop {
                if !self.advance()? {
                    break;
                }
                if !self.line.starts_with("A ") {
                    pending = Some(self.line.clone());
                    break;
                }
                if variant != Variant::LseHvd {
                    return Err(self.malformed(format!("aux record in a {variant} index")));
                }
                let t = self.tokens();
                let k: u32 = self.num(t.get(1), "aux k")?;
                let ag: u32 = self.num(t.get(2), "aux g")?;
                let d: u32 = self.num(t.get(3), "aux depth")?;
                let n: usize = self.num(t.get(4), "aux size")?;
                if ag != g || k == 0 || k > k_max || d == 0 || k < 2 || g < 2 {
                    return Err(
                        self.malformed(format!("aux position ({k},{ag}) depth {d} invalid here"))
                    );
                }
                if last.is_some_and(|prev| prev >= (k, d)) {
                    return Err(self.malformed("aux records out of order"));
                }
                last = Some((k, d));
                if t.len() != 5 + n || n == 0 {
                    return Err(self.malformed("aux record size mismatch"));
                }
                let ids = self.ids(&t[5..], node_count)?;
                auxes[k as usize - 1].put(d, ids);
            }
            for (leaf, aux) in leaves.iter_mut().zip(auxes) {
                leaf.set_aux(aux);
            }
            branches.push(Branch::new(g, leaves));
        }

        let mut rows = Vec::with_capacity(g_star as usize);
        for g in 1..=g_star {
            if pending.take().is_none() {
                self.expect_line("size-table record")?;
            }
            let t = self.tokens();
            if t.len() < 3 || t[0] != "S" || self.num::<u32>(t.get(1), "g")? != g {
                return Err(self.malformed(format!("expected S {g} ...")));
            }
            let n: usize = self.num(t.get(2), "row length")?;
            if t.len() != 3 + n {
                return Err(self.malformed("size row length mismatch"));
            }
            let row = t[3..]
                .iter()
                .map(|s| self.num::<u32>(Some(s), "core size"))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if pending.is_some() || self.advance()? {
            return Err(self.malformed("trailing records"));
        }

        Ok(IndexTree::from_parts(
            variant,
            branches,
            CoreSizeTable::from_rows(rows),
            labels,
            fingerprint,
        ))
    }
}
