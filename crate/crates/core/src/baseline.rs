//! Reference-set averages (expected counts) and the minimum-constraint rule.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::model::{group_count, DocType, PaperRecord, TargetGroup};
use crate::{Error, Result};

/// An exact non-negative ratio of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub numer: u64,
    pub denom: u64,
}

impl Ratio {
    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn is_at_least_one(self) -> bool {
        self.numer >= self.denom
    }

    /// Half-up rounding to two decimals, computed in integer arithmetic.
    pub fn format_fixed2(self) -> String {
        let n = u128::from(self.numer);
        let d = u128::from(self.denom);
        let hundredths = (200 * n + d) / (2 * d);
        format!("{}.{:02}", hundredths / 100, hundredths % 100)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.numer) * u128::from(other.denom))
            .cmp(&(u128::from(other.numer) * u128::from(self.denom)))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

/// Which record fields besides the category partition the reference sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyScope {
    pub by_doc_type: bool,
    pub by_year: bool,
}

impl Default for KeyScope {
    fn default() -> Self {
        KeyScope {
            by_doc_type: true,
            by_year: true,
        }
    }
}

impl KeyScope {
    /// `category+doc_type+year`, `category+year`, `category+doc_type` or `category`.
    pub fn as_str(self) -> &'static str {
        match (self.by_doc_type, self.by_year) {
            (true, true) => "category+doc_type+year",
            (false, true) => "category+year",
            (true, false) => "category+doc_type",
            (false, false) => "category",
        }
    }

    pub fn parse(s: &str) -> Option<KeyScope> {
        let scope = |by_doc_type, by_year| KeyScope {
            by_doc_type,
            by_year,
        };
        match s.trim() {
            "category+doc_type+year" => Some(scope(true, true)),
            "category+year" => Some(scope(false, true)),
            "category+doc_type" => Some(scope(true, false)),
            "category" => Some(scope(false, false)),
            _ => None,
        }
    }

    pub fn cell(self, doc_type: DocType, year: i32) -> CellKey {
        CellKey {
            doc_type: self.by_doc_type.then_some(doc_type),
            year: self.by_year.then_some(year),
        }
    }
}

/// The non-category part of a reference-set key; `None` means pooled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub doc_type: Option<DocType>,
    pub year: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaselineKey {
    pub category: String,
    pub doc_type: Option<DocType>,
    pub year: Option<i32>,
    pub group: String,
}

/// Sum of channel counts over a reference set and its size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BaselineEntry {
    pub total: u64,
    pub n_papers: u64,
}

impl BaselineEntry {
    pub fn rho(&self) -> Ratio {
        Ratio {
            numer: self.total,
            denom: self.n_papers,
        }
    }

    /// Minimum constraint: scores exist only where the average count is at least one.
    pub fn eligible(&self) -> bool {
        self.total >= self.n_papers
    }

    fn absorb(&mut self, other: BaselineEntry) {
        self.total += other.total;
        self.n_papers += other.n_papers;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    /// Identifies the corpus the table was derived from, e.g. a content digest.
    pub corpus: String,
    pub created: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineTable {
    pub group: TargetGroup,
    pub scope: KeyScope,
    pub provenance: Provenance,
    cells: BTreeMap<String, BTreeMap<CellKey, BaselineEntry>>,
}

impl BaselineTable {
    pub fn empty(group: TargetGroup, scope: KeyScope) -> Self {
        BaselineTable {
            group,
            scope,
            provenance: Provenance::default(),
            cells: BTreeMap::new(),
        }
    }

    /// Builds a table from stored entries, e.g. a frozen baseline file.
    pub fn from_entries<I>(group: TargetGroup, scope: KeyScope, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, CellKey, BaselineEntry)>,
    {
        let mut t = BaselineTable::empty(group, scope);
        for (category, cell, entry) in entries {
            if entry.n_papers == 0 {
                return Err(Error::InvalidBaseline(format!(
                    "{category}: reference set with zero papers"
                )));
            }
            if cell.doc_type.is_some() != scope.by_doc_type || cell.year.is_some() != scope.by_year
            {
                return Err(Error::InvalidBaseline(format!(
                    "{category}: key does not match the table scope"
                )));
            }
            if t.cells
                .entry(category.clone())
                .or_default()
                .insert(cell, entry)
                .is_some()
            {
                return Err(Error::InvalidBaseline(format!("{category}: duplicate key")));
            }
        }
        Ok(t)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn lookup(&self, category: &str, doc_type: DocType, year: i32) -> Option<&BaselineEntry> {
        self.cells
            .get(category)?
            .get(&self.scope.cell(doc_type, year))
    }

    pub fn len(&self) -> usize {
        self.cells.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Entries in `BaselineKey` order.
    pub fn entries(&self) -> impl Iterator<Item = (BaselineKey, BaselineEntry)> + '_ {
        self.cells.iter().flat_map(move |(cat, cells)| {
            cells.iter().map(move |(cell, e)| {
                (
                    BaselineKey {
                        category: cat.clone(),
                        doc_type: cell.doc_type,
                        year: cell.year,
                        group: self.group.name.clone(),
                    },
                    *e,
                )
            })
        })
    }

    /// Raw cells in key order without allocating keys.
    pub fn cells(&self) -> impl Iterator<Item = (&str, CellKey, BaselineEntry)> + '_ {
        self.cells
            .iter()
            .flat_map(|(cat, cells)| cells.iter().map(move |(c, e)| (cat.as_str(), *c, *e)))
    }

    /// Pools two tables built over disjoint corpora.
    pub fn merge(&self, other: &BaselineTable) -> Result<BaselineTable> {
        self.check_compatible(&other.group, other.scope)?;
        let mut out = self.clone();
        out.absorb_cells(&other.cells);
        Ok(out)
    }

    fn check_compatible(&self, group: &TargetGroup, scope: KeyScope) -> Result<()> {
        if self.group != *group {
            return Err(Error::GroupMismatch {
                expected: self.group.name.clone(),
                found: group.name.clone(),
            });
        }
        if self.scope != scope {
            return Err(Error::InvalidBaseline("key scopes differ".into()));
        }
        Ok(())
    }

    fn absorb_cells(&mut self, cells: &BTreeMap<String, BTreeMap<CellKey, BaselineEntry>>) {
        for (cat, inner) in cells {
            let dst = self.cells.entry(cat.clone()).or_default();
            for (cell, e) in inner {
                dst.entry(*cell).or_default().absorb(*e);
            }
        }
    }
}

/// Mergeable partial baseline over a slice of a corpus.
///
/// Entries are integer sums, so merging partial accumulators in any order
/// yields the same table as a single sequential pass.
#[derive(Debug, Clone)]
pub struct BaselineAccumulator {
    table: BaselineTable,
    papers_seen: u64,
}

impl BaselineAccumulator {
    pub fn new(group: TargetGroup, scope: KeyScope) -> Self {
        BaselineAccumulator {
            table: BaselineTable::empty(group, scope),
            papers_seen: 0,
        }
    }

    /// Adds a paper's full count to every one of its categories.
    pub fn add(&mut self, paper: &PaperRecord) {
        let count = group_count(paper, &self.table.group);
        let cell = self.table.scope.cell(paper.doc_type, paper.year);
        for cat in &paper.categories {
            if !self.table.cells.contains_key(cat.as_str()) {
                self.table.cells.insert(cat.clone(), BTreeMap::new());
            }
            let inner = self
                .table
                .cells
                .get_mut(cat.as_str())
                .expect("inserted above");
            inner.entry(cell).or_default().absorb(BaselineEntry {
                total: count,
                n_papers: 1,
            });
        }
        self.papers_seen += 1;
    }

    pub fn merge(mut self, other: BaselineAccumulator) -> Result<Self> {
        self.table
            .check_compatible(&other.table.group, other.table.scope)?;
        self.table.absorb_cells(&other.table.cells);
        self.papers_seen += other.papers_seen;
        Ok(self)
    }

    pub fn finish(self) -> Result<BaselineTable> {
        if self.papers_seen == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(self.table)
    }
}

/// Average channel count per paper for every observed reference set.
pub fn compute_baselines(
    records: &[PaperRecord],
    group: &TargetGroup,
    scope: KeyScope,
) -> Result<BaselineTable> {
    let mut acc = BaselineAccumulator::new(group.clone(), scope);
    for r in records {
        acc.add(r);
    }
    acc.finish()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReportRow {
    pub key: BaselineKey,
    pub rho: Ratio,
    pub rho_value: f64,
    pub n_papers: u64,
    pub eligible: bool,
    /// Two-decimal rendering; averages below one show as `0.00`.
    pub display: String,
}

pub fn baseline_report(table: &BaselineTable) -> Vec<BaselineReportRow> {
    table
        .entries()
        .map(|(key, e)| {
            let rho = e.rho();
            let display = if e.eligible() {
                rho.format_fixed2()
            } else {
                String::from("0.00")
            };
            BaselineReportRow {
                key,
                rho,
                rho_value: rho.to_f64(),
                n_papers: e.n_papers,
                eligible: e.eligible(),
                display,
            }
        })
        .collect()
}
