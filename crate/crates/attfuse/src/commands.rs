//! Subcommand implementations. All output files are plain CSV written with
//! shortest round-trip float formatting, so identical inputs and seeds give
//! byte-identical files.

use std::fs;
use std::path::Path;

use attitude_fusion::datagen::{synthesize, Motion, SensorErrorModel, TrajectorySpec};
use attitude_fusion::eval::{bench_filters, mean, population_std, RmseReport};
use attitude_fusion::filters::{run_filter, CfAxisGains, FilterKind, FilterParams};
use attitude_fusion::freq::{ccf_tf, lcf_tf, log_space, ncf_tf, RationalTf};
use attitude_fusion::Attitude;

use crate::args::{BenchArgs, BodeArgs, BodeFilter, MotionKind, RunArgs, SweepArgs, SynthArgs};
use crate::dataset_io::{parse_dataset, write_dataset};
use crate::error::{CliError, Result};
use crate::svg::{write_plot, Panel, Series};

/// Build filter parameters from possibly per-axis gain lists (1 or 3 values
/// each; scalars broadcast).
fn cf_params(alpha: &[f64], kp: &[f64], ki: &[f64]) -> Result<FilterParams> {
    let expand = |name: &str, values: &[f64]| -> Result<[f64; 3]> {
        match values {
            [v] => Ok([*v; 3]),
            [a, b, c] => Ok([*a, *b, *c]),
            _ => Err(CliError::Usage(format!(
                "--{name} takes one shared value or three per-axis values"
            ))),
        }
    };
    let alpha = expand("alpha", alpha)?;
    let kp = expand("kp", kp)?;
    let ki = expand("ki", ki)?;
    let mut params = FilterParams::default();
    if alpha[1..].iter().all(|v| *v == alpha[0])
        && kp[1..].iter().all(|v| *v == kp[0])
        && ki[1..].iter().all(|v| *v == ki[0])
    {
        params = params.with_cf(alpha[0], kp[0], ki[0]);
    } else {
        params.per_axis = Some(CfAxisGains { alpha, kp, ki });
    }
    params.validate()?;
    Ok(params)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn track_csv(times: &[f64], track: &[Attitude]) -> String {
    let mut out = String::from("t,roll,pitch,yaw\n");
    for (t, att) in times.iter().zip(track) {
        out.push_str(&format!("{},{},{},{}\n", t, att.roll, att.pitch, att.yaw));
    }
    out
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let dataset = parse_dataset(&args.dataset)?;
    let params = cf_params(&args.alpha.0, &args.kp.0, &args.ki.0)?;
    ensure_dir(&args.out)?;
    let times = dataset.times();

    for &kind in &args.filter.0 {
        let track = run_filter(kind, &params, &dataset)?;
        write_file(
            &args.out.join(format!("{kind}_track.csv")),
            &track_csv(&times, &track),
        )?;

        let Some(reference) = &dataset.reference else {
            continue;
        };
        let report = RmseReport::compute(kind, &params, reference, &track, &times, args.window)?;
        let mut rmse_csv = String::from("filter,rmse_roll,rmse_pitch,rmse_yaw,rmse_average\n");
        rmse_csv.push_str(&format!(
            "{kind},{},{},{},{}\n",
            report.rmse_roll, report.rmse_pitch, report.rmse_yaw, report.rmse_average
        ));
        write_file(&args.out.join(format!("{kind}_rmse.csv")), &rmse_csv)?;

        let mut win_csv = String::from("window_start,rmse_roll,rmse_pitch,rmse_yaw,rmse_average\n");
        for w in &report.windowed {
            win_csv.push_str(&format!(
                "{},{},{},{},{}\n",
                w.start,
                w.rmse[0],
                w.rmse[1],
                w.rmse[2],
                w.average()
            ));
        }
        write_file(&args.out.join(format!("{kind}_windows.csv")), &win_csv)?;

        if args.svg {
            let panel = Panel {
                title: format!("{kind}: windowed RMSE ({} s windows)", args.window),
                x_label: "window start (s)".into(),
                y_label: "RMSE (rad)".into(),
                log_x: false,
                series: vec![
                    series_of(&report, 0, "roll"),
                    series_of(&report, 1, "pitch"),
                    series_of(&report, 2, "yaw"),
                    Series {
                        label: "average".into(),
                        points: report
                            .windowed
                            .iter()
                            .map(|w| (w.start, w.average()))
                            .collect(),
                    },
                ],
            };
            write_plot(&args.out.join(format!("{kind}_windows.svg")), &[panel])?;
        }
    }
    Ok(())
}

fn series_of(report: &RmseReport, axis: usize, label: &str) -> Series {
    Series {
        label: label.into(),
        points: report
            .windowed
            .iter()
            .map(|w| (w.start, w.rmse[axis]))
            .collect(),
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let dataset = parse_dataset(&args.dataset)?;
    if dataset.reference.is_none() {
        return Err(CliError::Data(
            "sweep needs a dataset with reference columns".into(),
        ));
    }
    for kind in &args.filter.0 {
        if !matches!(kind, FilterKind::Ncf | FilterKind::Ccf) {
            return Err(CliError::Usage(format!(
                "sweep supports ncf and ccf, not {kind}"
            )));
        }
    }

    // cell grid: every (kp, ki, alpha) combination, one column per filter
    let mut cells = Vec::new();
    for &kp in &args.kp.0 {
        for &ki in &args.ki.0 {
            for &alpha in &args.alpha.0 {
                cells.push((kp, ki, alpha));
            }
        }
    }
    let filters = &args.filter.0;
    let mut table = vec![vec![0.0f64; filters.len()]; cells.len()];

    // independent filter instances over a shared read-only dataset; the
    // output table is assembled serially afterwards
    let workers = std::thread::available_parallelism()
        .map(usize::from)
        .unwrap_or(1);
    let chunk = cells.len().div_ceil(workers);
    type CellRows = Vec<(usize, Vec<f64>)>;
    let results: Vec<Result<CellRows>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (w, cell_chunk) in cells.chunks(chunk).enumerate() {
            let dataset = &dataset;
            let handle = scope.spawn(move || {
                let reference = dataset.reference.as_ref().unwrap();
                let mut rows = Vec::new();
                for (i, &(kp, ki, alpha)) in cell_chunk.iter().enumerate() {
                    let params = FilterParams::default().with_cf(alpha, kp, ki);
                    let mut row = Vec::new();
                    for &kind in filters {
                        let track = run_filter(kind, &params, dataset)?;
                        let axes = attitude_fusion::eval::rmse(reference, &track)?;
                        row.push(attitude_fusion::eval::average_rmse(axes));
                    }
                    rows.push((w * chunk + i, row));
                }
                Ok(rows)
            });
            handles.push(handle);
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    for result in results {
        for (index, row) in result? {
            table[index] = row;
        }
    }

    let mut csv = String::from("kp,ki,alpha");
    for kind in filters {
        csv.push_str(&format!(",{kind}"));
    }
    csv.push('\n');
    for (&(kp, ki, alpha), row) in cells.iter().zip(&table) {
        csv.push_str(&format!("{kp},{ki},{alpha}"));
        for value in row {
            csv.push_str(&format!(",{value}"));
        }
        csv.push('\n');
    }
    // footer: mean and population standard deviation per filter column
    for (label, stat) in [
        ("mean_rmse", mean as fn(&[f64]) -> f64),
        ("std_dev", population_std as fn(&[f64]) -> f64),
    ] {
        csv.push_str(&format!("{label},,"));
        for col in 0..filters.len() {
            let column: Vec<f64> = table.iter().map(|row| row[col]).collect();
            csv.push_str(&format!(",{}", stat(&column)));
        }
        csv.push('\n');
    }
    write_file(&args.out, &csv)?;
    Ok(())
}

pub fn cmd_bode(args: &BodeArgs) -> Result<()> {
    let (hpf, lpf): (RationalTf, RationalTf) = match args.filter {
        BodeFilter::Lcf => lcf_tf(args.tau)?,
        BodeFilter::Ncf => ncf_tf(args.kp, args.ki)?,
        BodeFilter::Ccf => ccf_tf(args.alpha, args.kp, args.ki)?,
    };
    if !(args.wmin > 0.0 && args.wmax > args.wmin) {
        return Err(CliError::Usage("need 0 < wmin < wmax".into()));
    }
    if args.points < 2 {
        return Err(CliError::Usage("need at least 2 points".into()));
    }
    let grid = log_space(args.wmin, args.wmax, args.points);

    let mut csv =
        String::from("omega,hpf_mag_db,hpf_phase_deg,lpf_mag_db,lpf_phase_deg,sum_mag_db\n");
    let mut rows = Vec::with_capacity(grid.len());
    for &omega in &grid {
        let h = attitude_fusion::freq::eval_tf(&hpf, omega)?;
        let l = attitude_fusion::freq::eval_tf(&lpf, omega)?;
        let sum = hpf.eval(omega) + lpf.eval(omega);
        let sum_db = 20.0 * sum.norm().log10();
        csv.push_str(&format!(
            "{omega},{},{},{},{},{sum_db}\n",
            h.magnitude_db, h.phase_deg, l.magnitude_db, l.phase_deg
        ));
        rows.push((omega, h, l, sum_db));
    }
    write_file(&args.out, &csv)?;

    if let Some(svg_path) = &args.svg {
        let name = args.filter.name();
        let magnitude = Panel {
            title: format!("{name}: magnitude"),
            x_label: "omega (rad/s)".into(),
            y_label: "magnitude (dB)".into(),
            log_x: true,
            series: vec![
                Series {
                    label: "high-pass".into(),
                    points: rows.iter().map(|r| (r.0, r.1.magnitude_db)).collect(),
                },
                Series {
                    label: "low-pass".into(),
                    points: rows.iter().map(|r| (r.0, r.2.magnitude_db)).collect(),
                },
                Series {
                    label: "combined".into(),
                    points: rows.iter().map(|r| (r.0, r.3)).collect(),
                },
            ],
        };
        let phase = Panel {
            title: format!("{name}: phase"),
            x_label: "omega (rad/s)".into(),
            y_label: "phase (deg)".into(),
            log_x: true,
            series: vec![
                Series {
                    label: "high-pass".into(),
                    points: rows.iter().map(|r| (r.0, r.1.phase_deg)).collect(),
                },
                Series {
                    label: "low-pass".into(),
                    points: rows.iter().map(|r| (r.0, r.2.phase_deg)).collect(),
                },
            ],
        };
        write_plot(svg_path, &[magnitude, phase])?;
    }
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let motion = match args.motion {
        MotionKind::Static => Motion::level(),
        MotionKind::Sine => Motion::sinusoidal([0.3, 0.2, 0.5], [0.1, 0.08, 0.05]),
        MotionKind::Random => Motion::PiecewiseRandomSmooth {
            segment: 10.0,
            max_amplitude: 0.5,
        },
    };
    let spec = TrajectorySpec {
        duration: args.duration,
        rate: args.rate,
        motion,
        seed: args.seed,
    };
    let bias = match args.gyro_bias.0.as_slice() {
        [b] => [*b; 3],
        [x, y, z] => [*x, *y, *z],
        _ => {
            return Err(CliError::Usage(
                "--gyro-bias takes one shared value or three per-axis values".into(),
            ))
        }
    };
    let err = SensorErrorModel {
        gyro_bias_initial: bias,
        gyro_bias_walk_std: args.bias_walk,
        gyro_noise_std: args.gyro_noise,
        accel_noise_std: args.accel_noise,
        mag_noise_std: args.mag_noise,
        ..SensorErrorModel::default()
    };
    let dataset = synthesize(&spec, &err)?;
    write_dataset(&dataset, &args.out)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let dataset = parse_dataset(&args.dataset)?;
    let reports = bench_filters(
        &args.filter.0,
        &FilterParams::default(),
        &dataset,
        args.reps,
    )?;
    let mut csv = String::from("filter,mean_run_s,mean_step_s,normalized,repetitions\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.kind, r.mean_run_s, r.mean_step_s, r.normalized, r.repetitions
        ));
    }
    write_file(&args.out, &csv)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_axis_gains_parse() {
        let shared = cf_params(&[0.7], &[25.0], &[0.1]).unwrap();
        assert!(shared.per_axis.is_none());
        let mixed = cf_params(&[0.7], &[25.0, 30.0, 40.0], &[0.1]).unwrap();
        let gains = mixed.per_axis.unwrap();
        assert_eq!(gains.kp, [25.0, 30.0, 40.0]);
        assert_eq!(gains.alpha, [0.7; 3]);
        assert!(cf_params(&[0.7, 0.5], &[25.0], &[0.1]).is_err());
    }
}
