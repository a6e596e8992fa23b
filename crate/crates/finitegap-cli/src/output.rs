//! Deterministic CSV and JSON emission for field tables.

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use finitegap::Tolerances;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One tabulated complex field over the grid, nodes in x-outer/y-inner order.
pub struct FieldTable {
    pub name: &'static str,
    pub values: Vec<(f64, f64, Complex64)>,
}

/// Header metadata shared by every block of one run.
pub struct RunMetadata {
    pub spec_sha256: String,
    pub p_a: usize,
    pub tolerances: Tolerances,
}

pub fn sha256_hex(raw: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(raw);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

fn header_lines(meta: &RunMetadata, field: &str) -> String {
    let t = &meta.tolerances;
    format!(
        "# version = {VERSION}\n\
         # spec_sha256 = {}\n\
         # p_a = {}\n\
         # tol_residual = {:e}\n\
         # tol_certificate_rank = {:e}\n\
         # tol_condition_cutoff = {:e}\n\
         # tol_coincidence = {:e}\n\
         # tol_descent = {:e}\n\
         # field = {field}\n",
        meta.spec_sha256,
        meta.p_a,
        t.residual,
        t.certificate_rank,
        t.condition_cutoff,
        t.coincidence,
        t.descent,
    )
}

/// Full CSV block for one field: commented header, column names, then one
/// `x,y,re,im` row per grid node in fixed scientific notation.
pub fn csv_block(meta: &RunMetadata, table: &FieldTable) -> String {
    let mut out = header_lines(meta, table.name);
    out.push_str("x,y,re,im\n");
    for &(x, y, v) in &table.values {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            x, y, v.re, v.im
        ));
    }
    out
}

#[derive(Serialize)]
pub struct JsonSample {
    pub x: f64,
    pub y: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct JsonField {
    pub name: String,
    pub samples: Vec<JsonSample>,
}

#[derive(Serialize)]
pub struct JsonOutput {
    pub version: String,
    pub spec_sha256: String,
    pub p_a: usize,
    pub fields: Vec<JsonField>,
    pub max_residual: f64,
}

pub fn json_document(meta: &RunMetadata, tables: &[FieldTable], max_residual: f64) -> String {
    let fields = tables
        .iter()
        .map(|t| JsonField {
            name: t.name.to_string(),
            samples: t
                .values
                .iter()
                .map(|&(x, y, v)| JsonSample {
                    x,
                    y,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        })
        .collect();
    let doc = JsonOutput {
        version: VERSION.to_string(),
        spec_sha256: meta.spec_sha256.clone(),
        p_a: meta.p_a,
        fields,
        max_residual,
    };
    serde_json::to_string_pretty(&doc).expect("output document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_block_is_deterministic_and_well_formed() {
        let meta = RunMetadata {
            spec_sha256: "ab".repeat(32),
            p_a: 2,
            tolerances: Tolerances::default(),
        };
        let table = FieldTable {
            name: "u",
            values: vec![(0.0, -1.0, Complex64::new(1.5, -2.5))],
        };
        let a = csv_block(&meta, &table);
        let b = csv_block(&meta, &table);
        assert_eq!(a, b);
        assert!(a.starts_with(&format!("# version = {VERSION}\n")));
        assert!(a.contains("# field = u\n"));
        assert!(a.contains("x,y,re,im\n"));
        assert!(a.ends_with("0.0000000000000000e0,-1.0000000000000000e0,1.5000000000000000e0,-2.5000000000000000e0\n"));
    }

    #[test]
    fn sha_matches_known_vector() {
        // sha256("abc")
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
