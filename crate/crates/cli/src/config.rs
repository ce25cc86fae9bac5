//! Command-line surface and the effective configuration derived from flags
//! and environment.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsdl_core::locator::{AliasSource, AliasTable, ResolutionEnvironment};
use dsdl_core::pipeline::PipelineOptions;
use dsdl_core::resolve::{LibraryEnvironment, LIBRARY_PATH_VAR};
use dsdl_core::validate::ValidateOptions;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "dsdl",
    version,
    about = "Validate and inspect DSDL dataset descriptions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Treat missing required fields as errors and fail on any warning.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Extra library directory, searched after DSDL_LIBRARY_PATH.
    #[arg(long = "library-path", global = true, value_name = "DIR")]
    pub library_paths: Vec<PathBuf>,
    /// Directory that relative locators are joined onto.
    #[arg(long, global = true, value_name = "DIR")]
    pub data_root: Option<String>,
    /// Locator alias binding; overrides DSDL_ALIAS_<NAME>.
    #[arg(long = "alias", global = true, value_name = "NAME=DIR", value_parser = parse_alias)]
    pub aliases: Vec<(String, String)>,
    /// Stop validating samples after this many errors.
    #[arg(long, global = true, value_name = "N")]
    pub max_errors: Option<usize>,
    /// Print the effective configuration before running.
    #[arg(long, global = true)]
    pub show_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, resolve and validate a description file.
    Validate { file: PathBuf },
    /// Show the resolved schema of a description file.
    Inspect { file: PathBuf },
    /// Classify object locators and resolve them where possible.
    ResolveLoc {
        #[arg(required = true)]
        locators: Vec<String>,
    },
    /// Dataset statistics over the validated samples.
    Summary { file: PathBuf },
}

fn parse_alias(text: &str) -> Result<(String, String), String> {
    match text.split_once('=') {
        Some((name, dir)) if !name.is_empty() && !dir.is_empty() => {
            Ok((name.to_owned(), dir.to_owned()))
        }
        _ => Err(format!("expected NAME=DIR, got {text:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathSource {
    Default,
    Env,
    Flag,
}

#[derive(Debug, Clone, Serialize)]
pub struct LibraryDir {
    pub path: PathBuf,
    pub source: PathSource,
}

#[derive(Debug, Clone, Serialize)]
pub struct AliasBinding {
    pub name: String,
    pub dir: String,
    pub source: AliasSource,
}

/// Everything a command needs, resolved once.
#[derive(Debug, Clone, Serialize)]
pub struct CliConfig {
    pub format: Format,
    pub strict: bool,
    pub max_errors: Option<usize>,
    pub data_root: Option<String>,
    /// Search order after the importing file's own directory.
    pub library_path: Vec<LibraryDir>,
    /// Effective bindings, sorted by name.
    pub aliases: Vec<AliasBinding>,
    #[serde(skip)]
    alias_table: AliasTable,
}

impl CliConfig {
    /// `library_var` is the value of DSDL_LIBRARY_PATH; `vars` are all
    /// environment variables, scanned for alias bindings.
    pub fn new(
        args: &GlobalArgs,
        library_var: Option<OsString>,
        vars: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        let mut library_path = vec![LibraryDir {
            path: LibraryEnvironment::default_library_dir(),
            source: PathSource::Default,
        }];
        if let Some(v) = &library_var {
            library_path.extend(
                std::env::split_paths(v)
                    .filter(|p| !p.as_os_str().is_empty())
                    .map(|path| LibraryDir {
                        path,
                        source: PathSource::Env,
                    }),
            );
        }
        library_path.extend(args.library_paths.iter().map(|p| LibraryDir {
            path: p.clone(),
            source: PathSource::Flag,
        }));

        let mut alias_table = AliasTable::new();
        alias_table.add_env_vars(vars);
        for (name, dir) in &args.aliases {
            alias_table.set(AliasSource::Flag, name, dir);
        }
        let aliases = alias_table
            .effective()
            .into_iter()
            .map(|(name, (dir, source))| AliasBinding {
                name: name.to_owned(),
                dir: dir.to_owned(),
                source,
            })
            .collect();

        CliConfig {
            format: args.format,
            strict: args.strict,
            max_errors: args.max_errors,
            data_root: args.data_root.clone(),
            library_path,
            aliases,
            alias_table,
        }
    }

    pub fn from_process_env(args: &GlobalArgs) -> Self {
        Self::new(
            args,
            std::env::var_os(LIBRARY_PATH_VAR),
            std::env::vars_os()
                .filter_map(|(k, v)| Some((k.into_string().ok()?, v.into_string().ok()?))),
        )
    }

    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            library: LibraryEnvironment::new(
                self.library_path.iter().map(|d| d.path.clone()).collect(),
            ),
            validate: ValidateOptions {
                strict: self.strict,
                max_errors: self.max_errors,
                ..Default::default()
            },
            media_classes: Vec::new(),
        }
    }

    pub fn resolution(&self) -> ResolutionEnvironment {
        ResolutionEnvironment {
            data_root: self.data_root.clone(),
            aliases: self.alias_table.clone(),
            id_mapper: None,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let fmt = match self.format {
            Format::Text => "text",
            Format::Json => "json",
        };
        out += &format!("format: {fmt}\nstrict: {}\n", self.strict);
        out += &format!(
            "max-errors: {}\n",
            self.max_errors.map_or("none".to_owned(), |n| n.to_string())
        );
        out += &format!(
            "data-root: {}\n",
            self.data_root.as_deref().unwrap_or("(unset)")
        );
        out += "library-path:\n";
        for d in &self.library_path {
            out += &format!("  {} ({})\n", d.path.display(), source_name(d.source));
        }
        out += "aliases:\n";
        for a in &self.aliases {
            let src = match a.source {
                AliasSource::Flag => "flag",
                AliasSource::Config => "config",
                AliasSource::Env => "env",
            };
            out += &format!("  {} = {} ({src})\n", a.name, a.dir);
        }
        out
    }
}

fn source_name(s: PathSource) -> &'static str {
    match s {
        PathSource::Default => "default",
        PathSource::Env => "env",
        PathSource::Flag => "flag",
    }
}
