//! CSV emission and companion plot scripts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use spinenv::ConcurrenceTrace;

use crate::error::CliError;

pub const TRACE_HEADER: [&str; 12] = [
    "t", "C", "C_par", "C_anti", "rho11", "rho22", "rho33", "rho44", "rho14_re", "rho14_im", "rho23_re", "rho23_im",
];

pub struct Output {
    pub dir: PathBuf,
    pub plot: bool,
}

impl Output {
    fn create(&self, name: &str, meta: &str) -> Result<(PathBuf, fs::File), CliError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(name);
        let mut file = fs::File::create(&path)?;
        writeln!(file, "# spinenv-cli {} | {}", env!("CARGO_PKG_VERSION"), meta)?;
        Ok((path, file))
    }

    pub fn trace(&self, name: &str, meta: &str, trace: &ConcurrenceTrace<f64>) -> Result<PathBuf, CliError> {
        let (path, file) = self.create(name, meta)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(TRACE_HEADER)?;
        for i in 0..trace.len() {
            let s = &trace.states[i];
            let e = |a, b| s.element(a, b);
            let row = [
                trace.times[i],
                trace.c[i],
                trace.c_par[i],
                trace.c_anti[i],
                e(1, 1).re,
                e(2, 2).re,
                e(3, 3).re,
                e(4, 4).re,
                e(1, 4).re,
                e(1, 4).im,
                e(2, 3).re,
                e(2, 3).im,
            ];
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        if self.plot {
            self.script(&path, "t", &["C", "C_par", "C_anti"])?;
        }
        Ok(path)
    }

    /// Generic table; `None` cells are written empty.
    pub fn table(&self, name: &str, meta: &str, header: &[&str], rows: &[Vec<Option<String>>]) -> Result<PathBuf, CliError> {
        let (path, file) = self.create(name, meta)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row.iter().map(|c| c.as_deref().unwrap_or("")))?;
        }
        w.flush()?;
        if self.plot {
            self.script(&path, header[0], &header[1..])?;
        }
        Ok(path)
    }

    fn script(&self, csv_path: &Path, x: &str, ys: &[&str]) -> Result<(), CliError> {
        let file = csv_path.file_name().and_then(|f| f.to_str()).unwrap_or_default();
        let ys: Vec<String> = ys.iter().map(|y| format!("{y:?}")).collect();
        let body = format!(
            "import pathlib\n\
             import matplotlib.pyplot as plt\n\
             import pandas as pd\n\n\
             here = pathlib.Path(__file__).parent\n\
             df = pd.read_csv(here / {file:?}, comment=\"#\")\n\
             fig, ax = plt.subplots()\n\
             for col in [{}]:\n    \
                 ax.plot(df[{x:?}], df[col], marker=\".\" if len(df) < 50 else None, label=col)\n\
             ax.set_xlabel({x:?})\n\
             ax.legend()\n\
             fig.savefig(here / {png:?}, dpi=150)\n",
            ys.join(", "),
            png = format!("{}.png", file.trim_end_matches(".csv")),
        );
        fs::write(csv_path.with_extension("py"), body)?;
        Ok(())
    }
}

pub fn fmt_opt(x: Option<f64>) -> Option<String> {
    x.map(|v| v.to_string())
}
