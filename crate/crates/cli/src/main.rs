//! `voa-tensor`: runs identity suites, property checks and fusions.
//!
//! Exit status is 0 when every result passes, 1 when a result fails and 2
//! on configuration or parse errors.

mod check;
mod compat;
mod fuse;
mod report;
mod setup;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voa_tensor::dual::functional::LambdaSpec;
use voa_tensor::instances::Instance;
use voa_tensor::{Error, Result};

use report::{Report, RunConfig};
use setup::{flavors, parse_modules, Plan};

#[derive(Parser)]
#[command(name = "voa-tensor", version, about = "Exact checks for tensor products of vertex algebra modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs the identity suite and the property table.
    Check {
        #[command(flatten)]
        common: Common,
        /// `delta` or `all`.
        #[arg(long)]
        suite: Option<String>,
        /// Property id; repeatable.
        #[arg(long = "property")]
        properties: Vec<String>,
    },
    /// Computes both tensor products of two modules and compares with the oracle.
    Fuse {
        #[command(flatten)]
        common: Common,
        w1: String,
        w2: String,
    },
    /// Checks compatibility, Jacobi and grading restriction for one functional.
    Compat {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Built-in instance (`heisenberg`, `a2`, `z2`, `qxq`, `q`) or a definition file.
    #[arg(long, default_value = "heisenberg")]
    instance: String,
    /// Weight cutoff of truncated instances.
    #[arg(long, default_value_t = 4)]
    cutoff: i64,
    /// Exponent window radius.
    #[arg(long)]
    window: Option<i64>,
    /// `zero`, `canonical:w'=<name>`, `random:seed=<n>`, `balanced:seed=<n>` or a file.
    #[arg(long)]
    lambda: Option<String>,
    /// `P`, `Q` or `both`; defaults to `both`, or `P` for a canonical functional.
    #[arg(long)]
    flavor: Option<String>,
    /// Modules `W₁,W₂` of the pair, by name.
    #[arg(long, value_delimiter = ',')]
    modules: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes the report here instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

impl Common {
    fn validate(&self) -> Result<()> {
        if self.cutoff < 0 {
            return Err(Error::Config(format!("cutoff must be nonnegative, got {}", self.cutoff)));
        }
        if matches!(self.window, Some(w) if w < 1) {
            return Err(Error::Config("window radius must be at least 1".into()));
        }
        Ok(())
    }

    fn config(&self, command: &str) -> RunConfig {
        RunConfig {
            command: command.into(),
            instance: self.instance.clone(),
            cutoff: self.cutoff,
            window: self.window,
            suite: None,
            properties: Vec::new(),
            lambda: None,
            flavor: self.flavor.clone().unwrap_or_else(|| "both".into()),
            modules: self.modules.clone(),
            seed: self.seed,
        }
    }

    fn plan(&self) -> Result<Plan> {
        Plan::new(Instance::load(&self.instance, self.cutoff)?, parse_modules(&self.modules)?)
    }

    fn lambda(&self, plan: &Plan, ctx: &setup::Ctx) -> Result<LambdaSpec> {
        match &self.lambda {
            Some(s) => LambdaSpec::parse(s),
            None => Ok(plan.default_lambda(ctx, self.seed)),
        }
    }
}

fn run(cli: &Cli) -> Result<(Report, &Common)> {
    match &cli.command {
        Command::Check { common, suite, properties } => {
            common.validate()?;
            let plan = common.plan()?;
            let ctx = plan.ctx()?;
            let spec = common.lambda(&plan, &ctx)?;
            let mut config = common.config("check");
            config.suite = suite.clone();
            config.properties = properties.clone();
            config.lambda = Some(spec.render());
            let results = check::run_check(&plan, suite.as_deref(), properties, &spec, common.window)?;
            Ok((Report::new(config, results), common))
        }
        Command::Fuse { common, w1, w2 } => {
            common.validate()?;
            let inst = Instance::load(&common.instance, common.cutoff)?;
            let mut config = common.config("fuse");
            config.modules = vec![w1.clone(), w2.clone()];
            let results = fuse::run_fuse(&inst, w1, w2, &flavors(&config.flavor)?, common.seed)?;
            Ok((Report::new(config, results), common))
        }
        Command::Compat { common } => {
            common.validate()?;
            let plan = common.plan()?;
            let ctx = plan.ctx()?;
            let spec = common.lambda(&plan, &ctx)?;
            let lambda = plan.lambda(&ctx, &spec)?;
            let mut config = common.config("compat");
            config.lambda = Some(spec.render());
            if common.flavor.is_none() && matches!(spec, LambdaSpec::Canonical { .. }) {
                config.flavor = "P".into();
            }
            let radius = common.window.unwrap_or(check::DEFAULT_RADIUS);
            let results = compat::run_compat(&plan, &lambda, &flavors(&config.flavor)?, radius)?;
            Ok((Report::new(config, results), common))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, common) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
