use std::fs;
use std::io::Read;
use std::path::Path;

use curvelab_core::io::parse_operator;
use curvelab_core::{CurvatureOperator, Fixture};

use crate::args::InputArgs;
use crate::CliError;

/// Resolves `INPUT`, `-` or `--fixture NAME --n N` to an operator.
pub fn load_operator(args: &InputArgs) -> Result<CurvatureOperator, CliError> {
    match (&args.input, &args.fixture) {
        (_, Some(name)) => {
            let fixture: Fixture = name.parse()?;
            let n = args.n.ok_or_else(|| CliError::Usage("--fixture needs --n".into()))?;
            Ok(fixture.build(n)?)
        }
        (Some(path), None) => Ok(parse_operator(&read_source(path)?)?),
        (None, None) => Err(CliError::Usage(
            "no operator given: pass a JSON file, `-` for stdin, or --fixture NAME --n N".into(),
        )),
    }
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
    }
}
