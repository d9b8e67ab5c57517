//! Subcommand execution. Every command writes its outputs plus `manifest.json`
//! and `run.log` into the output directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use log::{info, warn};
use mnrs_core::{
    aggregate, baseline_report, builtin_sector_map, compare_by_tag, corpus_stats, entity_index,
    rank_report, status_group_summary, AggregateRow, BaselineTable, Diagnostic, PaperRecord,
    Provenance, ScoreRun, SectorMap, TargetGroup,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::corpus::{load_corpus, sha256_hex, LoadReport};
use crate::error::{Error, Result};
use crate::parallel;
use crate::report::{
    render_baseline_report, render_comparison, render_rank_report, render_status_groups,
};
use crate::tables::{read_baselines, write_baselines, write_scores};
use crate::taxonomy_file::parse_override;

/// How many individual rejects, duplicates or diagnostics are logged before summarizing.
const LOG_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    IngestCheck,
    Baseline,
    Score,
    Rank,
    Compare,
    Pipeline,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::IngestCheck => "ingest-check",
            Command::Baseline => "baseline",
            Command::Score => "score",
            Command::Rank => "rank",
            Command::Compare => "compare",
            Command::Pipeline => "pipeline",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// Files written, manifest and log included.
    pub files: Vec<PathBuf>,
}

/// File-name form of a group or tag name: ASCII alphanumerics kept, others as `_`.
pub fn slug(name: &str) -> String {
    name.trim()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub fn baseline_file_name(group: &str) -> String {
    format!("baselines_{}.csv", slug(group))
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    parallel::with_workers(cfg.workers, || Run::new(cmd, cfg).execute())?
}

struct Output {
    name: String,
    rows: usize,
    body: String,
}

struct Run<'a> {
    cmd: Command,
    cfg: &'a RunConfig,
    started: u64,
    inputs: BTreeMap<String, Value>,
    outputs: Vec<Output>,
    log: Vec<String>,
    summary: BTreeMap<String, Value>,
    exit_code: i32,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

impl<'a> Run<'a> {
    fn new(cmd: Command, cfg: &'a RunConfig) -> Self {
        Run {
            cmd,
            cfg,
            started: unix_now(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            log: Vec::new(),
            summary: BTreeMap::new(),
            exit_code: 0,
        }
    }

    fn note(&mut self, msg: String) {
        self.log.push(msg);
    }

    fn input(&mut self, role: String, path: &Path, digest: String) {
        self.inputs.insert(
            role,
            json!({ "path": path.display().to_string(), "sha256": digest }),
        );
    }

    fn emit(&mut self, name: String, rows: usize, body: String) {
        self.outputs.push(Output { name, rows, body });
    }

    fn execute(mut self) -> Result<Outcome> {
        if self.cmd == Command::Compare && self.cfg.tag.as_deref().map_or(true, str::is_empty) {
            return Err(Error::Usage("compare needs a tag (--tag)".into()));
        }
        let taxonomy = self.taxonomy()?;
        let groups = self.groups(&taxonomy)?;
        let load = self.load(&taxonomy)?;
        let records = &load.records;

        match self.cmd {
            Command::IngestCheck => self.ingest_check(&load)?,
            Command::Baseline => {
                let tables = self.baselines(records, &groups)?;
                self.write_baseline_outputs(&tables)?;
            }
            Command::Score => {
                let tables = self.baselines(records, &groups)?;
                let runs = self.score(records, &tables);
                self.write_score_outputs(&runs)?;
            }
            Command::Rank => {
                let tables = self.baselines(records, &groups)?;
                let runs = self.score(records, &tables);
                self.rank(records, &tables, &runs)?;
            }
            Command::Compare => {
                let tables = self.baselines(records, &groups)?;
                self.compare(records, &tables)?;
            }
            Command::Pipeline => {
                self.ingest_check(&load)?;
                let tables = self.baselines(records, &groups)?;
                self.write_baseline_outputs(&tables)?;
                let runs = self.score(records, &tables);
                self.write_score_outputs(&runs)?;
                self.rank(records, &tables, &runs)?;
                if self.cfg.tag.is_some() {
                    self.compare(records, &tables)?;
                }
            }
        }
        self.finish()
    }

    fn taxonomy(&mut self) -> Result<SectorMap> {
        let mut map = builtin_sector_map();
        if let Some(path) = &self.cfg.taxonomy {
            let bytes = read_input(path)?;
            let text = std::str::from_utf8(&bytes)
                .map_err(|e| Error::Format(format!("{}: not UTF-8: {e}", path.display())))?;
            let ov = parse_override(text).map_err(|e| match e {
                Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
                other => other,
            })?;
            for notice in map.apply(&ov)? {
                warn!("taxonomy override: {notice}");
                self.note(format!("taxonomy override: {notice}"));
            }
            self.input("taxonomy".into(), path, sha256_hex(&bytes));
        }
        Ok(map)
    }

    fn groups(&mut self, taxonomy: &SectorMap) -> Result<Vec<TargetGroup>> {
        let mut out: Vec<TargetGroup> = Vec::new();
        for expr in &self.cfg.groups {
            let g = taxonomy
                .resolve(expr)
                .map_err(|e| Error::Usage(e.to_string()))?;
            if out
                .iter()
                .any(|o| slug(&o.name).eq_ignore_ascii_case(&slug(&g.name)))
            {
                return Err(Error::Usage(format!(
                    "target group `{}` given twice",
                    g.name
                )));
            }
            out.push(g);
        }
        Ok(out)
    }

    fn load(&mut self, taxonomy: &SectorMap) -> Result<LoadReport> {
        let path = &self.cfg.corpus;
        let load = load_corpus(path, &self.cfg.schema_version, taxonomy)?;
        self.input("corpus".into(), path, load.digest.clone());
        for r in load.rejects.iter().take(LOG_LIMIT) {
            warn!("{}:{}: rejected: {}", path.display(), r.line, r.reason);
        }
        if load.rejects.len() > LOG_LIMIT {
            warn!(
                "{} more rejected lines (see rejects.csv)",
                load.rejects.len() - LOG_LIMIT
            );
        }
        for d in load.duplicates.iter().take(LOG_LIMIT) {
            warn!(
                "{}:{}: duplicate identifier {} superseded by line {}",
                path.display(),
                d.superseded_line,
                d.id,
                d.kept_line
            );
        }
        if load.duplicates.len() > LOG_LIMIT {
            warn!(
                "{} more duplicate identifiers",
                load.duplicates.len() - LOG_LIMIT
            );
        }
        for d in &load.duplicates {
            self.note(format!(
                "duplicate identifier {} at line {} superseded by line {}",
                d.id, d.superseded_line, d.kept_line
            ));
        }
        if !load.rejects.is_empty() {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["line", "reason"])?;
            for r in &load.rejects {
                w.write_record([r.line.to_string(), r.reason.clone()])?;
            }
            let body = String::from_utf8(w.into_inner().map_err(|e| Error::Data(e.to_string()))?)
                .expect("csv output is UTF-8");
            self.emit("rejects.csv".into(), load.rejects.len(), body);
        }
        self.summary.insert(
            "corpus".into(),
            json!({
                "lines": load.lines,
                "accepted": load.records.len(),
                "rejected": load.rejects.len(),
                "duplicates": load.duplicates.len(),
                "missing_reader_blocks": load.missing_reader_blocks,
            }),
        );
        info!(
            "loaded {} records from {} lines ({} rejected, {} duplicates)",
            load.records.len(),
            load.lines,
            load.rejects.len(),
            load.duplicates.len()
        );
        if load.records.is_empty() {
            return Err(Error::Data(format!(
                "empty corpus: {} has no valid records",
                path.display()
            )));
        }
        Ok(load)
    }

    fn ingest_check(&mut self, load: &LoadReport) -> Result<()> {
        let stats = corpus_stats(&load.records)?;
        let groups = status_group_summary(&load.records)?;
        let doc = json!({
            "lines": load.lines,
            "accepted": load.records.len(),
            "rejected": load.rejects.len(),
            "duplicates": load.duplicates.len(),
            "missing_reader_blocks": load.missing_reader_blocks,
            "stats": stats,
        });
        self.emit(
            "corpus_stats.json".into(),
            1,
            serde_json::to_string_pretty(&doc)? + "\n",
        );
        for &fmt in &self.cfg.formats {
            let body = render_status_groups(&groups, &stats, fmt)?;
            self.emit(
                format!("status_groups.{}", fmt.extension()),
                groups.len() + 1,
                body,
            );
        }
        println!(
            "{} papers ({} articles, {} reviews); {} reader counts, {:.2} per paper; {} ({:.2}%) with no readers; {} rejected lines",
            stats.n_papers,
            stats.n_articles,
            stats.n_reviews,
            stats.total_reader_counts,
            stats.mean_readers_per_paper,
            stats.n_zero_reader_papers,
            stats.pct_zero_reader_papers,
            load.rejects.len()
        );
        if !load.rejects.is_empty() && self.cmd == Command::IngestCheck {
            self.exit_code = 2;
        }
        Ok(())
    }

    fn baselines(
        &mut self,
        records: &[PaperRecord],
        groups: &[TargetGroup],
    ) -> Result<Vec<BaselineTable>> {
        let corpus_id = format!(
            "sha256:{}",
            self.inputs["corpus"]["sha256"].as_str().unwrap_or("")
        );
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let table = match &self.cfg.baseline_dir {
                Some(dir) => {
                    let path = dir.join(baseline_file_name(&g.name));
                    let bytes = read_input(&path)?;
                    let mut table = read_baselines(&path)?;
                    if table.group.channel != g.channel {
                        return Err(Error::Data(format!(
                            "{}: table counts `{}` but group {} counts `{}`",
                            path.display(),
                            table.group.channel.to_expr(),
                            g.name,
                            g.channel.to_expr()
                        )));
                    }
                    if table.scope != self.cfg.key_scope {
                        return Err(Error::Data(format!(
                            "{}: table keyed by {} but the run uses {}",
                            path.display(),
                            table.scope.as_str(),
                            self.cfg.key_scope.as_str()
                        )));
                    }
                    info!("group {}: frozen baselines from {}", g.name, path.display());
                    self.input(format!("baseline:{}", g.name), &path, sha256_hex(&bytes));
                    table.group = g.clone();
                    table
                }
                None => parallel::compute_baselines(records, g, self.cfg.key_scope)?
                    .with_provenance(Provenance {
                        corpus: corpus_id.clone(),
                        created: None,
                    }),
            };
            let ineligible = table.entries().filter(|(_, e)| !e.eligible()).count();
            if ineligible > 0 {
                warn!(
                    "group {}: {} of {} reference sets below the minimum and excluded",
                    g.name,
                    ineligible,
                    table.len()
                );
            }
            out.push(table);
        }
        Ok(out)
    }

    fn write_baseline_outputs(&mut self, tables: &[BaselineTable]) -> Result<()> {
        for t in tables {
            let mut buf = Vec::new();
            write_baselines(&mut buf, t)?;
            self.emit(
                baseline_file_name(&t.group.name),
                t.len(),
                String::from_utf8(buf).expect("csv output is UTF-8"),
            );
            let rows = baseline_report(t);
            let label = t.group.name.clone();
            for &fmt in &self.cfg.formats {
                let body = render_baseline_report(&rows, &label, fmt)?;
                self.emit(
                    format!("baseline_report_{}.{}", slug(&label), fmt.extension()),
                    rows.len(),
                    body,
                );
            }
        }
        Ok(())
    }

    fn score(&mut self, records: &[PaperRecord], tables: &[BaselineTable]) -> Vec<ScoreRun> {
        let mut runs = Vec::with_capacity(tables.len());
        for t in tables {
            let run = parallel::score_corpus(records, t, self.cfg.mode);
            self.diagnostics(&run.group, &run.diagnostics);
            if let Some(f) = run.scale_factor {
                self.note(format!("group {}: scale factor {f}", run.group));
            }
            info!(
                "group {}: {} score rows, {} ineligible reference sets skipped",
                run.group,
                run.rows.len(),
                run.ineligible
            );
            runs.push(run);
        }
        runs
    }

    fn diagnostics(&mut self, group: &str, diags: &[Diagnostic]) {
        let missing = diags
            .iter()
            .filter(|d| matches!(d, Diagnostic::MissingBaseline { .. }))
            .count();
        for d in diags {
            if !matches!(d, Diagnostic::MissingBaseline { .. }) {
                warn!("group {group}: {d}");
            }
            self.note(format!("group {group}: {d}"));
        }
        if missing > 0 {
            warn!("group {group}: {missing} paper-category pairs had no baseline and were skipped");
        }
    }

    fn write_score_outputs(&mut self, runs: &[ScoreRun]) -> Result<()> {
        for run in runs {
            let mut buf = Vec::new();
            write_scores(&mut buf, &run.rows)?;
            self.emit(
                format!("scores_{}.csv", slug(&run.group)),
                run.rows.len(),
                String::from_utf8(buf).expect("csv output is UTF-8"),
            );
        }
        Ok(())
    }

    fn rank(
        &mut self,
        records: &[PaperRecord],
        tables: &[BaselineTable],
        runs: &[ScoreRun],
    ) -> Result<()> {
        let dim = &self.cfg.entity;
        let index = entity_index(records, dim);
        let aggs: Vec<(String, Vec<AggregateRow>)> = runs
            .iter()
            .map(|run| {
                let a = aggregate(&run.rows, &index, self.cfg.min_distinct, &run.group);
                info!(
                    "group {}: {} entities ranked, {} below {} distinct papers, {} papers without a {dim}",
                    run.group,
                    a.rows.len(),
                    a.below_threshold,
                    self.cfg.min_distinct,
                    a.unmapped_papers
                );
                (run.group.clone(), a.rows)
            })
            .collect();
        let entity_label = match dim {
            mnrs_core::EntityDim::Journal => "Journal".to_string(),
            mnrs_core::EntityDim::Country => "Country".to_string(),
            mnrs_core::EntityDim::Institution => "Institution".to_string(),
            mnrs_core::EntityDim::Custom(name) => name.clone(),
        };
        let dim_slug = slug(&dim.to_string());
        for (i, (group, rows)) in aggs.iter().enumerate() {
            let companions: Vec<(&str, &[AggregateRow])> = aggs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, (g, r))| (g.as_str(), r.as_slice()))
                .collect();
            let report = rank_report(rows, self.cfg.top_k, group, &companions);
            let labels: Vec<String> = std::iter::once(&tables[i])
                .chain(
                    tables
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, t)| t),
                )
                .map(|t| t.group.indicator_label())
                .collect();
            for &fmt in &self.cfg.formats {
                let body = render_rank_report(&report, &entity_label, &labels, fmt)?;
                self.emit(
                    format!("rank_{dim_slug}_{}.{}", slug(group), fmt.extension()),
                    report.lines.len(),
                    body,
                );
            }
        }
        Ok(())
    }

    fn compare(&mut self, records: &[PaperRecord], tables: &[BaselineTable]) -> Result<()> {
        let tag = self.cfg.tag.clone().unwrap_or_default();
        let c = compare_by_tag(records, &tag, tables, self.cfg.mode);
        if !c.tag_found() {
            warn!("no tagged paper carries `{tag}`; the comparison is empty");
        }
        for d in &c.diagnostics {
            if !matches!(d, Diagnostic::MissingBaseline { .. }) {
                warn!("compare: {d}");
            }
        }
        for &fmt in &self.cfg.formats {
            let body = render_comparison(&c, fmt)?;
            self.emit(
                format!("compare_{}.{}", slug(&tag), fmt.extension()),
                4,
                body,
            );
        }
        Ok(())
    }

    fn finish(mut self) -> Result<Outcome> {
        let dir = self.cfg.output_dir.clone();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut files = Vec::new();
        let mut listed = Vec::new();
        for o in &self.outputs {
            let path = dir.join(&o.name);
            fs::write(&path, &o.body).map_err(|e| Error::io(&path, e))?;
            listed.push(json!({
                "file": o.name,
                "rows": o.rows,
                "sha256": sha256_hex(o.body.as_bytes()),
            }));
            files.push(path);
        }
        let manifest = json!({
            "tool": "mnrs",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.cmd.name(),
            "config": self.cfg.to_json(),
            "inputs": self.inputs,
            "summary": self.summary,
            "outputs": listed,
            "exit_code": self.exit_code,
        });
        let path = dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        files.push(path);

        let mut log = format!(
            "command={}\nstarted_unix={}\nfinished_unix={}\nworkers={}\n",
            self.cmd.name(),
            self.started,
            unix_now(),
            rayon::current_num_threads()
        );
        for line in std::mem::take(&mut self.log) {
            log.push_str(&line);
            log.push('\n');
        }
        let path = dir.join("run.log");
        fs::write(&path, log).map_err(|e| Error::io(&path, e))?;
        files.push(path);
        info!("wrote {} files to {}", files.len(), dir.display());
        Ok(Outcome {
            exit_code: self.exit_code,
            files,
        })
    }
}
