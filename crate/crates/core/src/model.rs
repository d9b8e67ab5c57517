use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A self-declared Mendeley academic status.
///
/// The first twelve variants are the canonical groups. The remaining five are
/// labels Mendeley used before its 2016 remapping; they are folded onto a
/// canonical group through the alias table before any counting happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StatusGroup {
    StudentBachelor,
    StudentMaster,
    StudentPostgraduate,
    StudentPhD,
    DoctoralStudent,
    Lecturer,
    SeniorLecturer,
    AssociateProfessor,
    Professor,
    Researcher,
    Librarian,
    Other,
    // legacy
    AssistantProfessor,
    PostDoc,
    ResearcherAcademic,
    ResearcherNonAcademic,
    OtherProfessional,
}

impl StatusGroup {
    pub const CANONICAL: [StatusGroup; 12] = [
        StatusGroup::StudentBachelor,
        StatusGroup::StudentMaster,
        StatusGroup::StudentPostgraduate,
        StatusGroup::StudentPhD,
        StatusGroup::DoctoralStudent,
        StatusGroup::Lecturer,
        StatusGroup::SeniorLecturer,
        StatusGroup::AssociateProfessor,
        StatusGroup::Professor,
        StatusGroup::Researcher,
        StatusGroup::Librarian,
        StatusGroup::Other,
    ];

    pub const LEGACY: [StatusGroup; 5] = [
        StatusGroup::AssistantProfessor,
        StatusGroup::PostDoc,
        StatusGroup::ResearcherAcademic,
        StatusGroup::ResearcherNonAcademic,
        StatusGroup::OtherProfessional,
    ];

    pub fn all() -> impl Iterator<Item = StatusGroup> {
        Self::CANONICAL.into_iter().chain(Self::LEGACY)
    }

    /// Position among the canonical groups, `None` for legacy labels.
    pub fn index(self) -> Option<usize> {
        let i = self as usize;
        (i < Self::CANONICAL.len()).then_some(i)
    }

    pub fn is_canonical(self) -> bool {
        self.index().is_some()
    }

    /// The built-in alias target. Canonical groups map to themselves.
    pub fn default_canonical(self) -> StatusGroup {
        match self {
            StatusGroup::AssistantProfessor => StatusGroup::AssociateProfessor,
            StatusGroup::PostDoc
            | StatusGroup::ResearcherAcademic
            | StatusGroup::ResearcherNonAcademic => StatusGroup::Researcher,
            StatusGroup::OtherProfessional => StatusGroup::Other,
            g => g,
        }
    }

    /// Identifier-style name, as used in target-group expressions and override files.
    pub fn name(self) -> &'static str {
        match self {
            StatusGroup::StudentBachelor => "StudentBachelor",
            StatusGroup::StudentMaster => "StudentMaster",
            StatusGroup::StudentPostgraduate => "StudentPostgraduate",
            StatusGroup::StudentPhD => "StudentPhD",
            StatusGroup::DoctoralStudent => "DoctoralStudent",
            StatusGroup::Lecturer => "Lecturer",
            StatusGroup::SeniorLecturer => "SeniorLecturer",
            StatusGroup::AssociateProfessor => "AssociateProfessor",
            StatusGroup::Professor => "Professor",
            StatusGroup::Researcher => "Researcher",
            StatusGroup::Librarian => "Librarian",
            StatusGroup::Other => "Other",
            StatusGroup::AssistantProfessor => "AssistantProfessor",
            StatusGroup::PostDoc => "PostDoc",
            StatusGroup::ResearcherAcademic => "ResearcherAcademic",
            StatusGroup::ResearcherNonAcademic => "ResearcherNonAcademic",
            StatusGroup::OtherProfessional => "OtherProfessional",
        }
    }

    /// Human-readable Mendeley label, used when writing reader blocks.
    pub fn label(self) -> &'static str {
        match self {
            StatusGroup::StudentBachelor => "Student (Bachelor)",
            StatusGroup::StudentMaster => "Student (Master)",
            StatusGroup::StudentPostgraduate => "Student (Postgraduate)",
            StatusGroup::StudentPhD => "Ph.D. Student",
            StatusGroup::DoctoralStudent => "Doctoral Student",
            StatusGroup::Lecturer => "Lecturer",
            StatusGroup::SeniorLecturer => "Senior Lecturer",
            StatusGroup::AssociateProfessor => "Associate Professor",
            StatusGroup::Professor => "Professor",
            StatusGroup::Researcher => "Researcher",
            StatusGroup::Librarian => "Librarian",
            StatusGroup::Other => "Other",
            StatusGroup::AssistantProfessor => "Assistant Professor",
            StatusGroup::PostDoc => "Post Doc",
            StatusGroup::ResearcherAcademic => "Researcher (at an Academic Institution)",
            StatusGroup::ResearcherNonAcademic => "Researcher (at a non-Academic Institution)",
            StatusGroup::OtherProfessional => "Other Professional",
        }
    }

    /// Exact identifier match, ignoring ASCII case.
    pub fn from_name(name: &str) -> Option<StatusGroup> {
        Self::all().find(|g| g.name().eq_ignore_ascii_case(name.trim()))
    }

    /// Lenient match of the labels Mendeley has used over time
    /// ("Student  > Bachelor", "Student (Bachelor)", "Student, Bachelor", ...).
    pub fn from_label(label: &str) -> Option<StatusGroup> {
        let mut key = String::with_capacity(label.len());
        for c in label.chars() {
            if c.is_ascii_alphanumeric() {
                key.push(c.to_ascii_lowercase());
            }
        }
        let g = match key.as_str() {
            "studentbachelor" | "bachelorstudent" | "bachelor" => StatusGroup::StudentBachelor,
            "studentmaster" | "mastersstudent" | "masterstudent" | "studentmasters" => {
                StatusGroup::StudentMaster
            }
            "studentpostgraduate" | "postgraduatestudent" | "studentpostgrad" => {
                StatusGroup::StudentPostgraduate
            }
            "studentphd" | "phdstudent" | "studentphdstudent" => StatusGroup::StudentPhD,
            "doctoralstudent" | "studentdoctoralstudent" => StatusGroup::DoctoralStudent,
            "lecturer" => StatusGroup::Lecturer,
            "seniorlecturer" | "lecturerseniorlecturer" => StatusGroup::SeniorLecturer,
            "associateprofessor" | "professorassociateprofessor" => StatusGroup::AssociateProfessor,
            "professor" => StatusGroup::Professor,
            "researcher" => StatusGroup::Researcher,
            "librarian" => StatusGroup::Librarian,
            "other" | "unspecified" => StatusGroup::Other,
            "assistantprofessor" => StatusGroup::AssistantProfessor,
            "postdoc" => StatusGroup::PostDoc,
            "researcheracademic" | "researcheratanacademicinstitution" => {
                StatusGroup::ResearcherAcademic
            }
            "researchernonacademic" | "researcheratanonacademicinstitution" => {
                StatusGroup::ResearcherNonAcademic
            }
            "otherprofessional" => StatusGroup::OtherProfessional,
            _ => return None,
        };
        Some(g)
    }
}

impl fmt::Display for StatusGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of canonical status groups.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatusSet(u16);

impl StatusSet {
    pub const EMPTY: StatusSet = StatusSet(0);
    pub const ALL: StatusSet = StatusSet((1 << 12) - 1);

    /// Inserts a canonical group; legacy groups are ignored, fold them first.
    pub fn insert(&mut self, g: StatusGroup) -> bool {
        match g.index() {
            Some(i) => {
                let had = self.0 & (1 << i) != 0;
                self.0 |= 1 << i;
                !had
            }
            None => false,
        }
    }

    pub fn contains(self, g: StatusGroup) -> bool {
        g.index().is_some_and(|i| self.0 & (1 << i) != 0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: StatusSet) -> StatusSet {
        StatusSet(self.0 | other.0)
    }

    pub fn intersection(self, other: StatusSet) -> StatusSet {
        StatusSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = StatusGroup> {
        StatusGroup::CANONICAL
            .into_iter()
            .filter(move |g| self.contains(*g))
    }
}

impl FromIterator<StatusGroup> for StatusSet {
    fn from_iter<I: IntoIterator<Item = StatusGroup>>(iter: I) -> Self {
        let mut s = StatusSet::EMPTY;
        for g in iter {
            s.insert(g);
        }
        s
    }
}

/// Where a paper's count comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CountChannel {
    Readers(StatusSet),
    Citations,
}

impl CountChannel {
    pub fn readers(set: StatusSet) -> Result<CountChannel> {
        if set.is_empty() {
            return Err(Error::EmptyChannel);
        }
        Ok(CountChannel::Readers(set))
    }

    /// Canonical textual form: `citations` or `readers:A+B+...`.
    pub fn to_expr(&self) -> String {
        match self {
            CountChannel::Citations => String::from("citations"),
            CountChannel::Readers(set) => {
                let mut s = String::from("readers:");
                for (i, g) in set.iter().enumerate() {
                    if i > 0 {
                        s.push('+');
                    }
                    s.push_str(g.name());
                }
                s
            }
        }
    }

    /// Inverse of [`CountChannel::to_expr`]; only canonical group names are accepted.
    pub fn from_expr(expr: &str) -> Result<CountChannel> {
        let expr = expr.trim();
        if expr == "citations" {
            return Ok(CountChannel::Citations);
        }
        let unknown = |name: &str| Error::UnknownName {
            name: name.to_string(),
            known: StatusGroup::CANONICAL
                .iter()
                .map(|g| g.name().to_string())
                .collect(),
        };
        let list = expr.strip_prefix("readers:").ok_or_else(|| unknown(expr))?;
        let mut set = StatusSet::EMPTY;
        for token in list.split('+') {
            let g = StatusGroup::from_name(token)
                .filter(|g| g.is_canonical())
                .ok_or_else(|| unknown(token))?;
            set.insert(g);
        }
        CountChannel::readers(set)
    }
}

/// A named recipient group whose counts an indicator is restricted to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetGroup {
    pub name: String,
    pub channel: CountChannel,
}

impl TargetGroup {
    pub fn new(name: impl Into<String>, channel: CountChannel) -> Self {
        TargetGroup {
            name: name.into(),
            channel,
        }
    }

    pub fn citations() -> Self {
        TargetGroup::new("citations", CountChannel::Citations)
    }

    /// Column label for reports: `MNCS` for citations, `MNRS_<name>` otherwise.
    pub fn indicator_label(&self) -> String {
        match self.channel {
            CountChannel::Citations => String::from("MNCS"),
            CountChannel::Readers(_) => {
                let mut s = String::from("MNRS_");
                s.push_str(&self.name);
                s
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocType {
    Article,
    Review,
}

impl DocType {
    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
        }
    }

    pub fn parse(s: &str) -> Option<DocType> {
        match s.trim().to_ascii_lowercase().as_str() {
            "article" | "articles" => Some(DocType::Article),
            "review" | "reviews" => Some(DocType::Review),
            _ => None,
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reader counts per canonical status group. Groups never set read as zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ReaderCounts([u32; 12]);

impl ReaderCounts {
    pub fn get(&self, g: StatusGroup) -> u32 {
        g.index().map_or(0, |i| self.0[i])
    }

    /// Sets a canonical group's count. Legacy groups must be folded by the caller.
    pub fn set(&mut self, g: StatusGroup, n: u32) {
        if let Some(i) = g.index() {
            self.0[i] = n;
        }
    }

    /// Adds to a canonical group, saturating.
    pub fn add(&mut self, g: StatusGroup, n: u32) {
        if let Some(i) = g.index() {
            self.0[i] = self.0[i].saturating_add(n);
        }
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn sum_over(&self, set: StatusSet) -> u64 {
        set.iter().map(|g| u64::from(self.get(g))).sum()
    }

    /// Non-zero entries in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (StatusGroup, u32)> + '_ {
        StatusGroup::CANONICAL
            .into_iter()
            .zip(self.0)
            .filter(|(_, n)| *n > 0)
    }

    pub fn scale(&self, k: u32) -> ReaderCounts {
        let mut out = *self;
        for n in out.0.iter_mut() {
            *n = n.saturating_mul(k);
        }
        out
    }
}

/// One publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRecord {
    pub id: String,
    pub year: i32,
    pub doc_type: DocType,
    pub categories: Vec<String>,
    pub journal: String,
    pub countries: Vec<String>,
    pub institutions: Vec<String>,
    pub readers: ReaderCounts,
    pub citations: u64,
    pub tags: BTreeSet<String>,
    /// Extra list-valued fields usable as custom aggregation dimensions.
    pub attributes: BTreeMap<String, Vec<String>>,
}

impl PaperRecord {
    pub fn new<I, S>(id: impl Into<String>, year: i32, doc_type: DocType, categories: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PaperRecord {
            id: id.into(),
            year,
            doc_type,
            categories: categories.into_iter().map(Into::into).collect(),
            journal: String::new(),
            countries: Vec::new(),
            institutions: Vec::new(),
            readers: ReaderCounts::default(),
            citations: 0,
            tags: BTreeSet::new(),
            attributes: BTreeMap::new(),
        }
    }

    /// Checks the identifier and category invariants.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidRecord {
            id: self.id.clone(),
            reason: reason.to_string(),
        };
        if self.id.trim().is_empty() {
            return Err(invalid("empty identifier"));
        }
        if self.categories.is_empty() {
            return Err(invalid("empty category list"));
        }
        let mut seen = BTreeSet::new();
        for c in &self.categories {
            if c.trim().is_empty() {
                return Err(invalid("empty category label"));
            }
            if !seen.insert(c.as_str()) {
                return Err(invalid("duplicate category"));
            }
        }
        Ok(())
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag.trim())
    }
}

/// The paper's count in a target group's channel.
pub fn group_count(paper: &PaperRecord, group: &TargetGroup) -> u64 {
    match group.channel {
        CountChannel::Readers(set) => paper.readers.sum_over(set),
        CountChannel::Citations => paper.citations,
    }
}

/// A canonicalized identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedId {
    pub value: String,
    pub is_doi: bool,
}

const DOI_PREFIXES: [&str; 5] = [
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi:",
];

/// Trims, strips resolver prefixes and lowercases an identifier.
///
/// DOIs are case-insensitive, so lowercasing is lossless for them; other
/// identifiers are lowercased as well and flagged with `is_doi == false`.
pub fn normalize_doi(raw: &str) -> Result<NormalizedId> {
    let mut s = raw.trim().to_lowercase();
    if s.is_empty() {
        return Err(Error::EmptyIdentifier);
    }
    for p in DOI_PREFIXES {
        if let Some(rest) = s.strip_prefix(p) {
            s = rest.trim().to_string();
            break;
        }
    }
    if s.is_empty() {
        return Err(Error::EmptyIdentifier);
    }
    let is_doi = s.starts_with("10.") && s.contains('/');
    Ok(NormalizedId { value: s, is_doi })
}
