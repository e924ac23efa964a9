//! Textual argument grammars: drive specs, grid specs and level lists.
//! Parse failures carry the offending token and its position.

use pt_spectrum::{Drive, SpatialGrid};

use crate::CliError;

/// "const:<f0>" | "poly:<c0>,<c1>,..." | "file:<path>" (two-column CSV t,f).
pub fn parse_drive(spec: &str) -> Result<Drive, CliError> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| {
        CliError::Usage(format!(
            "drive spec '{spec}' has no ':'; expected const:<f0> | poly:<c0>,<c1>,... | file:<path>"
        ))
    })?;
    let body_offset = kind.len() + 1;
    match kind {
        "const" => {
            let f0: f64 = rest.parse().map_err(|_| {
                CliError::Usage(format!(
                    "drive spec: token '{rest}' at position {body_offset} is not a number"
                ))
            })?;
            Ok(Drive::constant(f0))
        }
        "poly" => {
            let mut coeffs = Vec::new();
            let mut offset = body_offset;
            for (k, tok) in rest.split(',').enumerate() {
                let c: f64 = tok.trim().parse().map_err(|_| {
                    CliError::Usage(format!(
                        "drive spec: coefficient #{k} token '{tok}' at position {offset} is not a number"
                    ))
                })?;
                coeffs.push(c);
                offset += tok.len() + 1;
            }
            if coeffs.is_empty() {
                return Err(CliError::Usage(
                    "drive spec: poly needs coefficients".into(),
                ));
            }
            Ok(Drive::polynomial(coeffs))
        }
        "file" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| CliError::Usage(format!("drive file '{rest}': {e}")))?;
            let mut times = Vec::new();
            let mut values = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let mut fields = line.split(',');
                let (a, b) = (fields.next().unwrap_or(""), fields.next().unwrap_or(""));
                if fields.next().is_some() {
                    return Err(CliError::Usage(format!(
                        "drive file '{rest}' line {}: expected two columns t,f",
                        lineno + 1
                    )));
                }
                match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
                    (Ok(t), Ok(f)) => {
                        times.push(t);
                        values.push(f);
                    }
                    _ if lineno == 0 => continue, // header row
                    _ => {
                        return Err(CliError::Usage(format!(
                            "drive file '{rest}' line {}: tokens '{a}','{b}' are not numbers",
                            lineno + 1
                        )))
                    }
                }
            }
            Drive::sampled(times, values).map_err(|e| CliError::Usage(e.to_string()))
        }
        other => Err(CliError::Usage(format!(
            "drive spec: unknown kind '{other}' at position 0; expected const, poly or file"
        ))),
    }
}

/// "xmin:xmax:npts".
pub fn parse_grid(spec: &str) -> Result<SpatialGrid, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "grid spec '{spec}' must be xmin:xmax:npts"
        )));
    }
    let x_min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("grid spec: '{}' is not a number", parts[0])))?;
    let x_max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("grid spec: '{}' is not a number", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("grid spec: '{}' is not a point count", parts[2])))?;
    SpatialGrid::new(x_min, x_max, n).map_err(|e| CliError::Usage(e.to_string()))
}

/// "0,1,3" -> [0, 1, 3].
pub fn parse_n_list(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|tok| {
            tok.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!("level list: token '{tok}' is not a quantum number"))
            })
        })
        .collect()
}
