//! Field files.
//!
//! Binary layout: one UTF-8 header line terminated by `\n`,
//!
//! ```text
//! twistor-field v1 geometry=R4Lorentz dtype=complex64 rank=scalar spacing=0.0625 origin=-0.5,-0.5,-0.5,-0.5 extents=17,17,17,17 margin=0 support=2:6,2:6,2:6,2:6
//! ```
//!
//! followed by `len × components` complex values, each written as
//! little-endian `re` then `im`. `complex64` stores f64 parts and `complex32`
//! f32 parts. `support=none` marks a field without a support box. Reals are
//! printed with the shortest representation that parses back to the same
//! bits, so a write/read cycle is bit-exact.
//!
//! The CSV dump repeats the header behind `# `, then a column line and one
//! row per node: indices, coordinates, then `re,im` per component.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex;

use super::{FieldError, Geometry, GridField, GridSpec, Rank, SupportBox};
use crate::scalar::Real;

const MAGIC: &str = "twistor-field v1";

fn fmt_err(msg: impl Into<String>) -> FieldError {
    FieldError::Format(msg.into())
}

fn io_err(e: std::io::Error) -> FieldError {
    FieldError::Format(e.to_string())
}

fn join<I: IntoIterator<Item = String>>(it: I) -> String {
    it.into_iter().collect::<Vec<_>>().join(",")
}

pub fn header_line<T: Real>(f: &GridField<T>) -> String {
    let s = &f.spec;
    let support = match &f.support_box {
        None => "none".to_string(),
        Some(b) => join(b.lo.iter().zip(&b.hi).map(|(l, h)| format!("{l}:{h}"))),
    };
    format!(
        "{MAGIC} geometry={} dtype={} rank={} spacing={} origin={} extents={} margin={} support={}",
        s.geometry.tag(),
        T::DTYPE,
        f.rank.tag(),
        s.spacing,
        join(s.origin.iter().map(|v| v.to_string())),
        join(s.extents.iter().map(|v| v.to_string())),
        f.margin,
        support
    )
}

/// Fields of a parsed header line.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHeader<T> {
    pub spec: GridSpec<T>,
    pub dtype: String,
    pub rank: Rank,
    pub margin: usize,
    pub support_box: Option<SupportBox>,
}

fn parse_list<V: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<V>, FieldError> {
    s.split(',')
        .map(|t| t.parse().map_err(|_| fmt_err(format!("bad {what} entry `{t}`"))))
        .collect()
}

pub fn parse_header<T: Real>(line: &str) -> Result<FieldHeader<T>, FieldError> {
    let rest = line
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| fmt_err("missing `twistor-field v1` magic"))?;
    let mut kv = std::collections::HashMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| fmt_err(format!("bad header token `{tok}`")))?;
        kv.insert(k, v);
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| fmt_err(format!("header lacks `{k}`")));
    let geometry = Geometry::parse(get("geometry")?).ok_or_else(|| fmt_err("unknown geometry"))?;
    let dtype = get("dtype")?.to_string();
    let rank = Rank::parse(get("rank")?).ok_or_else(|| fmt_err("unknown rank"))?;
    let spacing: T = get("spacing")?.parse().map_err(|_| fmt_err("bad spacing"))?;
    let origin: Vec<T> = parse_list(get("origin")?, "origin")?;
    let extents: Vec<usize> = parse_list(get("extents")?, "extents")?;
    let margin: usize = get("margin")?.parse().map_err(|_| fmt_err("bad margin"))?;
    let spec = GridSpec::new(geometry, origin, spacing, extents)?;
    let support_box = match get("support")? {
        "none" => None,
        s => {
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            for r in s.split(',') {
                let (l, h) = r.split_once(':').ok_or_else(|| fmt_err(format!("bad support range `{r}`")))?;
                lo.push(l.parse().map_err(|_| fmt_err("bad support index"))?);
                hi.push(h.parse().map_err(|_| fmt_err("bad support index"))?);
            }
            let b = SupportBox::new(lo, hi);
            if !b.fits(&spec) {
                return Err(fmt_err("support box does not fit the grid"));
            }
            Some(b)
        }
    };
    Ok(FieldHeader { spec, dtype, rank, margin, support_box })
}

fn finish<T: Real>(h: FieldHeader<T>, values: Vec<Complex<T>>) -> Result<GridField<T>, FieldError> {
    let f = GridField { spec: h.spec, rank: h.rank, values, support_box: h.support_box, margin: h.margin };
    if !f.is_finite() {
        return Err(FieldError::NonFinite);
    }
    if !f.respects_support() {
        return Err(fmt_err("nonzero values outside the support box"));
    }
    Ok(f)
}

pub fn write_field<T: Real, W: Write>(f: &GridField<T>, mut w: W) -> Result<(), FieldError> {
    let mut buf = Vec::with_capacity(f.values.len() * 2 * T::BYTES + 256);
    buf.extend_from_slice(header_line(f).as_bytes());
    buf.push(b'\n');
    for z in &f.values {
        z.re.put_le(&mut buf);
        z.im.put_le(&mut buf);
    }
    w.write_all(&buf).map_err(io_err)
}

pub fn read_field<T: Real, R: Read>(r: R) -> Result<GridField<T>, FieldError> {
    let mut r = BufReader::new(r);
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line).map_err(io_err)?;
    let line = String::from_utf8(line).map_err(|_| fmt_err("header is not UTF-8"))?;
    let h: FieldHeader<T> = parse_header(&line)?;
    if h.dtype != T::DTYPE {
        return Err(fmt_err(format!("file holds {}, reader expects {}", h.dtype, T::DTYPE)));
    }
    let n = h.spec.len() * h.rank.components();
    let mut bytes = Vec::with_capacity(n * 2 * T::BYTES);
    r.read_to_end(&mut bytes).map_err(io_err)?;
    if bytes.len() != n * 2 * T::BYTES {
        return Err(fmt_err(format!("expected {} data bytes, found {}", n * 2 * T::BYTES, bytes.len())));
    }
    let values = bytes
        .chunks_exact(2 * T::BYTES)
        .map(|c| Complex::new(T::get_le(&c[..T::BYTES]), T::get_le(&c[T::BYTES..])))
        .collect();
    finish(h, values)
}

pub fn save_field<T: Real>(f: &GridField<T>, path: &Path) -> Result<(), FieldError> {
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_field(f, std::io::BufWriter::new(file))
}

pub fn load_field<T: Real>(path: &Path) -> Result<GridField<T>, FieldError> {
    let file = std::fs::File::open(path).map_err(io_err)?;
    read_field(file)
}

/// dtype recorded in a field file, without reading the data.
pub fn peek_dtype(path: &Path) -> Result<String, FieldError> {
    let mut r = BufReader::new(std::fs::File::open(path).map_err(io_err)?);
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line).map_err(io_err)?;
    let line = String::from_utf8_lossy(&line);
    line.split_whitespace()
        .find_map(|t| t.strip_prefix("dtype="))
        .map(str::to_string)
        .ok_or_else(|| fmt_err("header lacks `dtype`"))
}

pub fn write_csv<T: Real, W: Write>(f: &GridField<T>, w: W) -> Result<(), FieldError> {
    let mut w = std::io::BufWriter::new(w);
    let d = f.spec.dim();
    let mut cols: Vec<String> = (0..d).map(|a| format!("i{a}")).collect();
    cols.extend((0..d).map(|a| format!("x{a}")));
    for c in 0..f.components() {
        cols.push(format!("c{c}_re"));
        cols.push(format!("c{c}_im"));
    }
    writeln!(w, "# {}", header_line(f)).map_err(io_err)?;
    writeln!(w, "{}", cols.join(",")).map_err(io_err)?;
    for k in 0..f.spec.len() {
        let m = f.spec.multi(k);
        let x = f.spec.coords(k);
        let mut row: Vec<String> = m[..d].iter().map(|i| i.to_string()).collect();
        row.extend(x[..d].iter().map(|v| v.to_string()));
        for z in f.node(k) {
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        writeln!(w, "{}", row.join(",")).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_csv<T: Real, R: Read>(r: R) -> Result<GridField<T>, FieldError> {
    let mut lines = BufReader::new(r).lines();
    let mut next = || lines.next().transpose().map_err(io_err);
    let head = next()?.ok_or_else(|| fmt_err("empty CSV"))?;
    let head = head.strip_prefix("# ").ok_or_else(|| fmt_err("CSV must start with `# ` header"))?;
    let h: FieldHeader<T> = parse_header(head)?;
    next()?.ok_or_else(|| fmt_err("CSV lacks the column line"))?;
    let d = h.spec.dim();
    let nc = h.rank.components();
    let mut values = vec![Complex::new(T::zero(), T::zero()); h.spec.len() * nc];
    let mut seen = vec![false; h.spec.len()];
    while let Some(line) = next()? {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 2 * d + 2 * nc {
            return Err(fmt_err(format!("row has {} cells, expected {}", cells.len(), 2 * d + 2 * nc)));
        }
        let idx: Vec<usize> = cells[..d]
            .iter()
            .map(|c| c.parse().map_err(|_| fmt_err(format!("bad index `{c}`"))))
            .collect::<Result<_, _>>()?;
        if idx.iter().zip(&h.spec.extents).any(|(i, n)| i >= n) {
            return Err(fmt_err("index out of range"));
        }
        let k = h.spec.flat(&idx);
        seen[k] = true;
        for c in 0..nc {
            let p = |s: &str| s.parse::<T>().map_err(|_| fmt_err(format!("bad value `{s}`")));
            values[k * nc + c] = Complex::new(p(cells[2 * d + 2 * c])?, p(cells[2 * d + 2 * c + 1])?);
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(fmt_err("CSV does not cover every node"));
    }
    finish(h, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample<T: Real>() -> GridField<T> {
        let spec = GridSpec::new(
            Geometry::R4Lorentz,
            vec![T::lit(-0.3), T::lit(0.1), T::lit(1.0 / 3.0), T::zero()],
            T::lit(0.07),
            vec![5, 6, 5, 7],
        )
        .unwrap();
        GridField::from_fn(&spec, Rank::SpinorMinus, |x, o| {
            o[0] = Complex::new(x[0].sin() / T::lit(3.0), x[1].exp());
            o[1] = Complex::new(x[2] * x[3], T::PI() * x[0]);
        })
        .with_support(SupportBox::new(vec![1, 1, 2, 2], vec![3, 4, 2, 4]))
        .unwrap()
    }

    fn bits_eq<T: Real>(a: &GridField<T>, b: &GridField<T>) -> bool {
        let enc = |f: &GridField<T>| {
            let mut v = Vec::new();
            for z in &f.values {
                z.re.put_le(&mut v);
                z.im.put_le(&mut v);
            }
            v
        };
        a.spec == b.spec && a.rank == b.rank && a.margin == b.margin && a.support_box == b.support_box && enc(a) == enc(b)
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let f = sample::<f64>();
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        let g: GridField<f64> = read_field(&buf[..]).unwrap();
        assert!(bits_eq(&f, &g));
        let f32f = sample::<f32>();
        let mut buf = Vec::new();
        write_field(&f32f, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf[..80]).contains("dtype=complex32"));
        assert!(bits_eq(&f32f, &read_field::<f32, _>(&buf[..]).unwrap()));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let f = sample::<f64>();
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let g: GridField<f64> = read_csv(&buf[..]).unwrap();
        assert!(bits_eq(&f, &g));
    }

    #[test]
    fn rejects_bad_input() {
        let f = sample::<f64>();
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        assert!(matches!(read_field::<f32, _>(&buf[..]), Err(FieldError::Format(_))));
        buf.pop();
        assert!(matches!(read_field::<f64, _>(&buf[..]), Err(FieldError::Format(_))));
        assert!(read_field::<f64, _>(&b"garbage\n"[..]).is_err());
    }
}
