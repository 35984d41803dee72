//! CSV ingestion. One observation per row: a `value` column plus zero, one
//! or two factor columns. Factor levels are indexed in sorted label order.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use anova_core::Dataset;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub factor_a: Option<String>,
    pub factor_b: Option<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputTable {
    pub factors: Vec<String>,
    pub rows: Vec<Row>,
}

/// A parsed table with the dataset built from it and the level labels per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub table: InputTable,
    pub dataset: Dataset,
    pub levels: Vec<Vec<String>>,
}

pub fn ingest(path: &Path) -> Result<Ingested, CliError> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> Result<Ingested, CliError> {
    let table = parse(reader)?;
    let (dataset, levels) = build(&table)?;
    Ok(Ingested { table, dataset, levels })
}

fn csv_error(e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    CliError::Csv {
        line,
        message: e.to_string(),
    }
}

pub fn parse<R: Read>(reader: R) -> Result<InputTable, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let value_col = header.iter().position(|h| h == "value");
    let factor_cols: Vec<usize> = (0..header.len()).filter(|&i| Some(i) != value_col).collect();
    let Some(value_col) = value_col.filter(|_| factor_cols.len() <= 2) else {
        return Err(CliError::Schema(header));
    };
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let field = &record[value_col];
        let value: f64 = field.parse().map_err(|_| CliError::NonNumeric {
            line,
            field: field.to_string(),
        })?;
        if !value.is_finite() {
            return Err(CliError::NonFinite {
                line,
                field: field.to_string(),
            });
        }
        let mut labels = factor_cols.iter().map(|&c| record[c].to_string());
        let factor_a = labels.next();
        let factor_b = labels.next();
        if factor_a.iter().chain(&factor_b).any(String::is_empty) {
            return Err(CliError::EmptyLevel { line });
        }
        rows.push(Row {
            factor_a,
            factor_b,
            value,
        });
    }
    if rows.is_empty() {
        return Err(CliError::NoData);
    }
    Ok(InputTable {
        factors: factor_cols.iter().map(|&c| header[c].clone()).collect(),
        rows,
    })
}

fn sorted_levels<'a>(labels: impl Iterator<Item = &'a String>) -> Vec<String> {
    labels.cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Groups rows into a dataset. Within a group, values are sorted so the
/// result does not depend on row order.
pub fn build(table: &InputTable) -> Result<(Dataset, Vec<Vec<String>>), CliError> {
    let sort = |v: &mut Vec<f64>| v.sort_by(f64::total_cmp);
    match table.factors.len() {
        0 => {
            let mut values: Vec<f64> = table.rows.iter().map(|r| r.value).collect();
            sort(&mut values);
            Ok((Dataset::single(values)?, Vec::new()))
        }
        1 => {
            let mut groups: BTreeMap<&String, Vec<f64>> = BTreeMap::new();
            for row in &table.rows {
                groups
                    .entry(row.factor_a.as_ref().expect("one factor"))
                    .or_default()
                    .push(row.value);
            }
            let levels = groups.keys().map(|k| k.to_string()).collect();
            let mut groups: Vec<Vec<f64>> = groups.into_values().collect();
            groups.iter_mut().for_each(sort);
            Ok((Dataset::one_way(&groups)?, vec![levels]))
        }
        _ => {
            let a_levels = sorted_levels(table.rows.iter().filter_map(|r| r.factor_a.as_ref()));
            let b_levels = sorted_levels(table.rows.iter().filter_map(|r| r.factor_b.as_ref()));
            let mut cells: BTreeMap<(&String, &String), Vec<f64>> = BTreeMap::new();
            for row in &table.rows {
                let key = (
                    row.factor_a.as_ref().expect("factor a"),
                    row.factor_b.as_ref().expect("factor b"),
                );
                cells.entry(key).or_default().push(row.value);
            }
            let mut grid = Vec::with_capacity(a_levels.len());
            let mut sizes = BTreeSet::new();
            for la in &a_levels {
                let mut row = Vec::with_capacity(b_levels.len());
                for lb in &b_levels {
                    let mut cell = cells.remove(&(la, lb)).unwrap_or_default();
                    if cell.is_empty() {
                        return Err(CliError::Unbalanced(format!("cell ({la}, {lb}) has no observations")));
                    }
                    sizes.insert(cell.len());
                    sort(&mut cell);
                    row.push(cell);
                }
                grid.push(row);
            }
            if sizes.len() > 1 {
                return Err(CliError::Unbalanced(format!("cell sizes {sizes:?} differ")));
            }
            Ok((Dataset::two_way(&grid)?, vec![a_levels, b_levels]))
        }
    }
}
