use std::io::{Read, Write};

use num_bigint::BigInt;

use crate::matrix::SparseMatrix;
use crate::rational::Rational;
use crate::LinalgError;

/// Writes the nonzero entries as CSV with header `row,col,num,den`.
pub fn write_csv<W: Write>(m: &SparseMatrix, w: W) -> Result<(), LinalgError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["row", "col", "num", "den"]).map_err(csv_err)?;
    for (i, j, x) in m.triplets() {
        wr.write_record([i.to_string(), j.to_string(), x.numer().to_string(), x.denom().to_string()])
            .map_err(csv_err)?;
    }
    wr.flush().map_err(|e| LinalgError::Csv(e.to_string()))
}

/// Reads a matrix written by [`write_csv`]; the shape is not stored in the
/// file and must be supplied.
pub fn read_csv<R: Read>(r: R, rows: usize, cols: usize) -> Result<SparseMatrix, LinalgError> {
    let mut rd = csv::Reader::from_reader(r);
    let mut trip = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let field = |k: usize| rec.get(k).ok_or_else(|| LinalgError::Csv(format!("short record {rec:?}")));
        let i: usize = field(0)?.parse().map_err(|e| LinalgError::Csv(format!("{e}")))?;
        let j: usize = field(1)?.parse().map_err(|e| LinalgError::Csv(format!("{e}")))?;
        let n: BigInt = field(2)?.parse().map_err(|e| LinalgError::Csv(format!("{e}")))?;
        let d: BigInt = field(3)?.parse().map_err(|e| LinalgError::Csv(format!("{e}")))?;
        if d == BigInt::from(0) {
            return Err(LinalgError::Csv("zero denominator".into()));
        }
        trip.push((i, j, Rational::from_bigs(n, d)));
    }
    SparseMatrix::from_triplets(rows, cols, trip)
}

fn csv_err(e: csv::Error) -> LinalgError {
    LinalgError::Csv(e.to_string())
}
