//! Status group → user type → sector assignments and named target groups.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{CountChannel, StatusGroup, StatusSet, TargetGroup};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    Scientific,
    Educational,
    Professional,
}

impl Sector {
    pub const ALL: [Sector; 3] = [
        Sector::Scientific,
        Sector::Educational,
        Sector::Professional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sector::Scientific => "Scientific",
            Sector::Educational => "Educational",
            Sector::Professional => "Professional",
        }
    }

    pub fn parse(s: &str) -> Option<Sector> {
        Self::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Something an override replaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Notice {
    pub key: String,
    pub old: String,
    pub new: String,
}

impl fmt::Display for Notice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: `{}` replaced by `{}`", self.key, self.old, self.new)
    }
}

/// User-supplied changes merged over the builtin map. Entries apply in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaxonomyOverride {
    pub sectors: Vec<(StatusGroup, Sector)>,
    pub user_types: Vec<(StatusGroup, String)>,
    pub aliases: Vec<(StatusGroup, StatusGroup)>,
    /// Named group definitions as target-group expressions.
    pub groups: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorMap {
    user_type_of: BTreeMap<StatusGroup, String>,
    sector_of: BTreeMap<StatusGroup, Sector>,
    aliases: BTreeMap<StatusGroup, StatusGroup>,
    named_groups: BTreeMap<String, StatusSet>,
}

const CITATION_NAMES: [&str; 2] = ["citations", "CIT"];

/// Built-in sector assignments plus the BS, ED and ALL named groups.
pub fn builtin_sector_map() -> SectorMap {
    use Sector::*;
    use StatusGroup::*;
    let rows: [(StatusGroup, &str, Sector); 17] = [
        (StudentBachelor, "Student (Bachelor)", Educational),
        (StudentMaster, "Student (Postgraduate)", Educational),
        (StudentPostgraduate, "Student (Postgraduate)", Educational),
        (StudentPhD, "PhD Student", Scientific),
        (DoctoralStudent, "PhD Student", Scientific),
        (Lecturer, "Assistant Professor", Educational),
        (SeniorLecturer, "Associate Professor", Educational),
        (AssociateProfessor, "Associate Professor", Scientific),
        (Professor, "Professor", Scientific),
        // merged from the academic/non-academic researcher rows and Post Doc
        (Researcher, "Researcher (Academic)", Scientific),
        (Librarian, "Librarian", Professional),
        (Other, "Other Professional", Professional),
        (AssistantProfessor, "Assistant Professor", Scientific),
        (PostDoc, "Postdoc", Scientific),
        (ResearcherAcademic, "Researcher (Academic)", Scientific),
        (
            ResearcherNonAcademic,
            "Researcher (Non Academic)",
            Professional,
        ),
        (OtherProfessional, "Other Professional", Professional),
    ];
    let mut map = SectorMap {
        user_type_of: BTreeMap::new(),
        sector_of: BTreeMap::new(),
        aliases: BTreeMap::new(),
        named_groups: BTreeMap::new(),
    };
    for (g, ut, s) in rows {
        map.user_type_of.insert(g, ut.to_string());
        map.sector_of.insert(g, s);
    }
    for g in StatusGroup::LEGACY {
        map.aliases.insert(g, g.default_canonical());
    }
    map.named_groups
        .insert("BS".into(), [StudentBachelor].into_iter().collect());
    map.named_groups.insert(
        "ED".into(),
        [
            Researcher,
            AssociateProfessor,
            Lecturer,
            Professor,
            SeniorLecturer,
        ]
        .into_iter()
        .collect(),
    );
    map.named_groups.insert("ALL".into(), StatusSet::ALL);
    map
}

impl SectorMap {
    pub fn sector_of(&self, g: StatusGroup) -> Sector {
        self.sector_of[&g]
    }

    pub fn user_type_of(&self, g: StatusGroup) -> &str {
        &self.user_type_of[&g]
    }

    pub fn named_group(&self, name: &str) -> Option<StatusSet> {
        self.named_groups.get(name).copied()
    }

    pub fn named_groups(&self) -> impl Iterator<Item = (&str, StatusSet)> {
        self.named_groups.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Folds a legacy label onto its canonical group.
    pub fn canonical(&self, g: StatusGroup) -> StatusGroup {
        self.aliases.get(&g).copied().unwrap_or(g)
    }

    /// Canonical groups assigned to `sector`.
    pub fn sector_members(&self, sector: Sector) -> StatusSet {
        StatusGroup::CANONICAL
            .into_iter()
            .filter(|g| self.sector_of[g] == sector)
            .collect()
    }

    /// Resolves a target-group expression.
    ///
    /// Accepted forms: a named group (`BS`, `ED`, `ALL`, user-defined),
    /// `sector:NAME`, `usertype:NAME`, a `+`-joined list of status names, or
    /// `citations` (alias `CIT`).
    pub fn resolve(&self, expr: &str) -> Result<TargetGroup> {
        let name = expr.trim();
        let channel = self.resolve_channel(name)?;
        Ok(TargetGroup::new(name, channel))
    }

    fn resolve_channel(&self, name: &str) -> Result<CountChannel> {
        if name.is_empty() {
            return Err(self.unknown(name));
        }
        if CITATION_NAMES.iter().any(|c| c.eq_ignore_ascii_case(name)) {
            return Ok(CountChannel::Citations);
        }
        if let Some(set) = self.named_groups.get(name) {
            return CountChannel::readers(*set);
        }
        if let Some(rest) = strip_prefix_ci(name, "sector:") {
            let sector = Sector::parse(rest).ok_or_else(|| self.unknown(name))?;
            return CountChannel::readers(self.sector_members(sector));
        }
        if let Some(rest) = strip_prefix_ci(name, "usertype:") {
            let rest = rest.trim();
            let set: StatusSet = StatusGroup::CANONICAL
                .into_iter()
                .filter(|g| self.user_type_of[g].eq_ignore_ascii_case(rest))
                .collect();
            if set.is_empty() {
                return Err(self.unknown(name));
            }
            return CountChannel::readers(set);
        }
        let mut set = StatusSet::EMPTY;
        for token in name.split('+') {
            let g = StatusGroup::from_name(token)
                .or_else(|| StatusGroup::from_label(token))
                .ok_or_else(|| self.unknown(token.trim()))?;
            set.insert(self.canonical(g));
        }
        CountChannel::readers(set)
    }

    fn unknown(&self, name: &str) -> Error {
        let mut known: Vec<String> = self.named_groups.keys().cloned().collect();
        known.extend(CITATION_NAMES.iter().map(|s| s.to_string()));
        known.extend(Sector::ALL.iter().map(|s| format!("sector:{s}")));
        known.extend(StatusGroup::all().map(|g| g.name().to_string()));
        Error::UnknownName {
            name: name.to_string(),
            known,
        }
    }

    /// Merges `ov` over this map. User values win; each replaced value yields a notice.
    pub fn apply(&mut self, ov: &TaxonomyOverride) -> Result<Vec<Notice>> {
        let mut notices = Vec::new();
        for (g, s) in &ov.sectors {
            let old = self.sector_of.insert(*g, *s).expect("total map");
            if old != *s {
                notices.push(Notice {
                    key: format!("sector.{g}"),
                    old: old.to_string(),
                    new: s.to_string(),
                });
            }
        }
        for (g, ut) in &ov.user_types {
            let old = self.user_type_of.insert(*g, ut.clone()).expect("total map");
            if old != *ut {
                notices.push(Notice {
                    key: format!("user_type.{g}"),
                    old,
                    new: ut.clone(),
                });
            }
        }
        for (from, to) in &ov.aliases {
            if from.is_canonical() || !to.is_canonical() {
                return Err(Error::UnknownName {
                    name: format!("{from} -> {to}"),
                    known: StatusGroup::LEGACY
                        .iter()
                        .map(|g| g.name().to_string())
                        .collect(),
                });
            }
            let old = self.aliases.insert(*from, *to).expect("total map");
            if old != *to {
                notices.push(Notice {
                    key: format!("alias.{from}"),
                    old: old.to_string(),
                    new: to.to_string(),
                });
            }
        }
        for (name, expr) in &ov.groups {
            let name = name.trim();
            if name.is_empty() || CITATION_NAMES.iter().any(|c| c.eq_ignore_ascii_case(name)) {
                return Err(self.unknown(name));
            }
            let set = match self.resolve_channel(expr)? {
                CountChannel::Readers(set) => set,
                CountChannel::Citations => return Err(self.unknown(expr)),
            };
            if let Some(old) = self.named_groups.insert(name.to_string(), set) {
                if old != set {
                    notices.push(Notice {
                        key: format!("groups.{name}"),
                        old: CountChannel::Readers(old).to_expr(),
                        new: CountChannel::Readers(set).to_expr(),
                    });
                }
            }
        }
        Ok(notices)
    }
}

fn strip_prefix_ci<'a>(s: &'a str, prefix: &str) -> Option<&'a str> {
    if s.len() >= prefix.len() && s[..prefix.len()].eq_ignore_ascii_case(prefix) {
        Some(&s[prefix.len()..])
    } else {
        None
    }
}
