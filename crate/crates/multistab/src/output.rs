//! CSV writers and the gnuplot script for basin maps.

use std::io::Write;

use multistab_core::dde::Trajectory;
use multistab_core::patterns::{Label, SweepResult};

use crate::Error;

/// `t,x1,...,xN`, every `stride`-th grid point plus the last one.
pub fn write_trajectory<W: Write>(traj: &Trajectory, stride: usize, out: W) -> Result<(), Error> {
    let stride = stride.max(1);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=traj.n()).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    let last = *traj.indices().end();
    for k in traj
        .indices()
        .filter(|k| (k - traj.indices().start()).is_multiple_of(stride) || *k == last)
    {
        let mut row = vec![traj.time(k).to_string()];
        row.extend(traj.state(k).iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// CSV token for a label: the side digits (`21` for `(2,1)`), or
/// `unclassified`.
pub fn label_token(label: &Label) -> String {
    match label {
        Label::Pattern(s) => s.entries().iter().map(u8::to_string).collect(),
        Label::Unclassified => "unclassified".into(),
    }
}

/// `x1,...,xN,label`.
pub fn write_sweep<W: Write>(sweep: &SweepResult, out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    let n = sweep.points.first().map_or(0, Vec::len);
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for (p, label) in sweep.points.iter().zip(&sweep.labels) {
        let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
        row.push(label_token(label));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Raster plot of a two-dimensional sweep, one colour per label.
pub fn gnuplot_script(csv_name: &str, image_name: &str, sweep: &SweepResult) -> String {
    let mut labels: Vec<String> = sweep.labels.iter().map(label_token).collect();
    labels.sort();
    labels.dedup();
    let clauses: Vec<String> = labels
        .iter()
        .map(|l| {
            format!("'{csv_name}' every ::1 using 1:(strcol(3) eq \"{l}\" ? $2 : NaN) with points pt 5 ps 0.6 title \"{l}\"")
        })
        .collect();
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 800,700\n\
         set output '{image_name}'\n\
         set xlabel 'x1(0)'\n\
         set ylabel 'x2(0)'\n\
         set key outside right\n\
         plot {}\n",
        clauses.join(", \\\n     ")
    )
}
