//! Cloud CSV and config JSON.
//!
//! A cloud file has one headerless row per point: a label (`sheet:x=<rat>:y=<bits>`,
//! `cube0` or `cube1`) followed by the four coordinates as `num/den`.

use std::io::{Read, Write};

use super::{Cloud, CloudConfig, Label, LabeledPoint4};
use crate::rational::{format_rational, parse_rational};
use crate::{Error, Result};

pub fn format_label(label: &Label) -> String {
    match label {
        Label::Sheet { x, y } => format!("sheet:x={}:y={}", format_rational(x), y),
        Label::Cube0 => "cube0".into(),
        Label::Cube1 => "cube1".into(),
    }
}

pub fn parse_label(text: &str) -> Result<Label> {
    match text.trim() {
        "cube0" => Ok(Label::Cube0),
        "cube1" => Ok(Label::Cube1),
        other => {
            let bad = || Error::Parse(format!("unknown point label {other:?}"));
            let rest = other.strip_prefix("sheet:x=").ok_or_else(bad)?;
            let (x, y) = rest.split_once(":y=").ok_or_else(bad)?;
            Ok(Label::Sheet {
                x: parse_rational(x)?,
                y: y.parse()?,
            })
        }
    }
}

pub fn write_cloud_csv<W: Write>(cloud: &Cloud, out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for p in cloud.points() {
        let mut row = vec![format_label(&p.label)];
        row.extend(p.coords.iter().map(format_rational));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_cloud_csv<R: Read>(input: R) -> Result<Cloud> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 5 {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected 5",
                line + 1,
                record.len()
            )));
        }
        let label = parse_label(&record[0])?;
        let mut coords = Vec::with_capacity(4);
        for field in record.iter().skip(1) {
            coords.push(parse_rational(field)?);
        }
        let coords: [_; 4] = coords.try_into().expect("four coordinates");
        points.push(LabeledPoint4 { coords, label });
    }
    Cloud::from_points(points)
}

pub fn cloud_to_csv_string(cloud: &Cloud) -> Result<String> {
    let mut buf = Vec::new();
    write_cloud_csv(cloud, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_config_json<R: Read>(input: R) -> Result<CloudConfig> {
    let cfg: CloudConfig = serde_json::from_reader(input)?;
    cfg.validate()?;
    Ok(cfg)
}
