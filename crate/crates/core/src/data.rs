use crate::bits::Bitset;
use crate::codes::{GenMatrix, LinearCode};
use crate::designs::Design;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::pdset::PDSet;
use crate::perm::Perm;
use serde::{Deserialize, Serialize};
use std::path::Path;

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

/// Group file: line `degree N`, then one generator per non-comment line as N
/// whitespace-separated 1-based images. `#` starts a comment.
pub fn parse_group_file(path: &Path) -> Result<Vec<Perm>> {
    let text = read_text(path)?;
    parse_group_text(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {}", path.display(), m)),
        e => e,
    })
}

pub fn parse_group_text(text: &str) -> Result<Vec<Perm>> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match degree {
            None => {
                let mut it = line.split_whitespace();
                if it.next() != Some("degree") {
                    return Err(Error::Parse(format!(
                        "line {}: expected `degree N`",
                        lineno + 1
                    )));
                }
                let n: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad degree", lineno + 1)))?;
                if it.next().is_some() {
                    return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
                }
                degree = Some(n);
            }
            Some(n) => {
                let imgs: Vec<u32> = line
                    .split_whitespace()
                    .map(|s| s.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| {
                        Error::Parse(format!("line {}: non-numeric image", lineno + 1))
                    })?;
                if imgs.len() != n {
                    return Err(Error::Parse(format!(
                        "line {}: {} images, expected {}",
                        lineno + 1,
                        imgs.len(),
                        n
                    )));
                }
                gens.push(Perm::from_images_1based(&imgs).map_err(|e| {
                    Error::Parse(format!("line {}: {}", lineno + 1, e))
                })?);
            }
        }
    }
    if degree.is_none() || gens.is_empty() {
        return Err(Error::Parse("no generators found".into()));
    }
    Ok(gens)
}

pub fn write_group_file(path: &Path, gens: &[Perm], comment: Option<&str>) -> Result<()> {
    let mut out = String::new();
    if let Some(c) = comment {
        out.push_str(&format!("# {}\n", c));
    }
    let degree = gens.first().map_or(0, |g| g.degree());
    out.push_str(&format!("degree {}\n", degree));
    for g in gens {
        let row: Vec<String> = g.images_1based().iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestSubgroup {
    pub file: String,
    pub order: u64,
    pub index: u64,
    pub rank: usize,
    pub pairing_blocks: usize,
    pub orbital_degrees: Vec<usize>,
    #[serde(default)]
    pub pairing_block_degrees: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub group: String,
    pub order: u64,
    pub degree: usize,
    pub subgroups: Vec<ManifestSubgroup>,
}

pub struct GroupBundle {
    pub name: String,
    pub manifest: Manifest,
    pub group: PermGroup,
    pub subgroups: Vec<(ManifestSubgroup, PermGroup)>,
}

/// Load a data directory (a `<name>.grp` parent, subgroup files and a
/// `manifest.json`) and validate every order/index/membership claim.
pub fn load_bundle(dir: &Path) -> Result<GroupBundle> {
    let manifest_path = dir.join("manifest.json");
    let manifest: Manifest = serde_json::from_str(&read_text(&manifest_path)?)
        .map_err(|e| Error::Parse(format!("{}: {}", manifest_path.display(), e)))?;
    let group_path = dir.join(&manifest.group);
    let group = PermGroup::from_generators(parse_group_file(&group_path)?)?;
    if group.order() != &num_bigint::BigUint::from(manifest.order) {
        return Err(Error::Data(format!(
            "{}: order {} does not match the declared {}",
            manifest.group,
            group.order(),
            manifest.order
        )));
    }
    if group.degree() != manifest.degree {
        return Err(Error::Data(format!(
            "{}: degree {} does not match the declared {}",
            manifest.group,
            group.degree(),
            manifest.degree
        )));
    }
    let mut subgroups = Vec::new();
    for sub in &manifest.subgroups {
        let h = PermGroup::from_generators(parse_group_file(&dir.join(&sub.file))?)?;
        for x in h.generators() {
            if !group.is_member(x)? {
                return Err(Error::Data(format!(
                    "{}: a generator is not a member of {}",
                    sub.file, manifest.group
                )));
            }
        }
        if h.order() != &num_bigint::BigUint::from(sub.order) {
            return Err(Error::Data(format!(
                "{}: order {} does not match the declared {}",
                sub.file,
                h.order(),
                sub.order
            )));
        }
        if sub.order * sub.index != manifest.order {
            return Err(Error::Data(format!(
                "{}: order × index ≠ |G|",
                sub.file
            )));
        }
        subgroups.push((sub.clone(), h));
    }
    let name = manifest
        .group
        .trim_end_matches(".grp")
        .to_string();
    Ok(GroupBundle {
        name,
        manifest,
        group,
        subgroups,
    })
}

/// Code file: header `code p n k`, then k generator rows as digit strings.
pub fn write_code_file(path: &Path, c: &LinearCode) -> Result<()> {
    let mut out = format!("code {} {} {}\n", c.p, c.n, c.k);
    match &c.rows {
        GenMatrix::Gf2(rows) => {
            for r in rows {
                let line: String = (0..c.n).map(|i| if r.get(i) { '1' } else { '0' }).collect();
                out.push_str(&line);
                out.push('\n');
            }
        }
        GenMatrix::Gfp(rows) => {
            for r in rows {
                let line: String = r.iter().map(|&x| (b'0' + x) as char).collect();
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn parse_code_file(path: &Path) -> Result<LinearCode> {
    let text = read_text(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty code file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "code" {
        return Err(Error::Parse("expected header `code p n k`".into()));
    }
    let p: u32 = parts[1].parse().map_err(|_| Error::Parse("bad p".into()))?;
    let n: usize = parts[2].parse().map_err(|_| Error::Parse("bad n".into()))?;
    let k: usize = parts[3].parse().map_err(|_| Error::Parse("bad k".into()))?;
    let mut matrix = Vec::with_capacity(k);
    for line in lines.take(k) {
        let row: Vec<u8> = line
            .trim()
            .bytes()
            .map(|b| {
                (b as char)
                    .to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse("non-digit in code row".into()))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "code row has {} digits, expected {}",
                row.len(),
                n
            )));
        }
        matrix.push(row);
    }
    if matrix.len() != k {
        return Err(Error::Parse("fewer rows than the declared dimension".into()));
    }
    crate::codes::code_from_matrix(&matrix, p)
}

/// PD-set file: header `pdset n k t size`, the information set (one line,
/// 1-based), then each permutation as an image list.
pub fn write_pdset_file(path: &Path, n: usize, pd: &PDSet) -> Result<()> {
    let mut out = format!("pdset {} {} {} {}\n", n, pd.info_set.len(), pd.t, pd.perms.len());
    let info: Vec<String> = pd.info_set.iter().map(|&i| (i + 1).to_string()).collect();
    out.push_str(&info.join(" "));
    out.push('\n');
    for p in &pd.perms {
        let row: Vec<String> = p.images_1based().iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn parse_pdset_file(path: &Path) -> Result<(usize, PDSet)> {
    let text = read_text(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty pdset file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "pdset" {
        return Err(Error::Parse("expected header `pdset n k t size`".into()));
    }
    let n: usize = parts[1].parse().map_err(|_| Error::Parse("bad n".into()))?;
    let k: usize = parts[2].parse().map_err(|_| Error::Parse("bad k".into()))?;
    let t: usize = parts[3].parse().map_err(|_| Error::Parse("bad t".into()))?;
    let size: usize = parts[4].parse().map_err(|_| Error::Parse("bad size".into()))?;
    let info_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing information set line".into()))?;
    let info_set: Vec<usize> = info_line
        .split_whitespace()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse("bad information set entry".into()))
                .and_then(|p| {
                    if p == 0 || p > n {
                        Err(Error::Parse(format!("coordinate {} out of range", p)))
                    } else {
                        Ok(p - 1)
                    }
                })
        })
        .collect::<Result<_>>()?;
    if info_set.len() != k {
        return Err(Error::Parse(format!(
            "information set has {} coordinates, expected {}",
            info_set.len(),
            k
        )));
    }
    let mut perms = Vec::with_capacity(size);
    for line in lines {
        let imgs: Vec<u32> = line
            .split_whitespace()
            .map(|s| s.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse("non-numeric image in permutation".into()))?;
        if imgs.len() != n {
            return Err(Error::Parse("permutation degree differs from n".into()));
        }
        perms.push(Perm::from_images_1based(&imgs)?);
    }
    if perms.len() != size {
        return Err(Error::Parse(format!(
            "{} permutations, header declares {}",
            perms.len(),
            size
        )));
    }
    Ok((n, PDSet { perms, info_set, t }))
}

/// Graph file: header `p graph N M`, then M edges as 1-based pairs.
pub fn parse_graph_file(path: &Path) -> Result<crate::graphs::Graph> {
    let text = read_text(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "p" || parts[1] != "graph" {
        return Err(Error::Parse("expected header `p graph N M`".into()));
    }
    let n: usize = parts[2].parse().map_err(|_| Error::Parse("bad N".into()))?;
    let m: usize = parts[3].parse().map_err(|_| Error::Parse("bad M".into()))?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad edge".into()))?;
        let v: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad edge".into()))?;
        if u == 0 || v == 0 || u > n || v > n || u == v {
            return Err(Error::Parse(format!("edge ({},{}) out of range", u, v)));
        }
        edges.push((u - 1, v - 1));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "{} edges, header declares {}",
            edges.len(),
            m
        )));
    }
    Ok(crate::graphs::Graph::from_edges(n, &edges))
}

/// Design file: header `design v b k`, then one block per line as sorted
/// 1-based point indices.
pub fn write_design_file(path: &Path, d: &Design) -> Result<()> {
    let mut out = format!("design {} {} {}\n", d.v, d.b(), d.k);
    for block in &d.blocks {
        let pts: Vec<String> = block.iter_ones().map(|p| (p + 1).to_string()).collect();
        out.push_str(&pts.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn parse_design_file(path: &Path) -> Result<Design> {
    let text = read_text(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty design file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "design" {
        return Err(Error::Parse("expected header `design v b k`".into()));
    }
    let v: usize = parts[1].parse().map_err(|_| Error::Parse("bad v".into()))?;
    let mut blocks = Vec::new();
    for line in lines {
        let mut b = Bitset::new(v);
        for tok in line.split_whitespace() {
            let p: usize = tok
                .parse()
                .map_err(|_| Error::Parse("bad point index".into()))?;
            if p == 0 || p > v {
                return Err(Error::Parse(format!("point {} out of range", p)));
            }
            b.set(p - 1);
        }
        blocks.push(b);
    }
    Design::new(v, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::code_from_matrix;
    use crate::pdset::PDSet;
    use std::path::PathBuf;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("drg-data-tests-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn group_file_round_trip() {
        let gens = vec![
            Perm::from_images(vec![1, 2, 0, 3]).unwrap(),
            Perm::from_images(vec![0, 1, 3, 2]).unwrap(),
        ];
        let path = tmp("roundtrip.grp");
        write_group_file(&path, &gens, Some("test generators")).unwrap();
        let back = parse_group_file(&path).unwrap();
        assert_eq!(back, gens);
    }

    #[test]
    fn group_parse_errors_carry_line_numbers() {
        let bad = "degree 3\n1 2 3\n1 1 2\n";
        let err = parse_group_text(bad).unwrap_err().to_string();
        assert!(err.contains("line 3"), "got: {}", err);
        assert!(parse_group_text("no header\n").is_err());
        assert!(parse_group_text("degree 3\n1 2\n").is_err());
    }

    #[test]
    fn code_file_round_trip() {
        let c = code_from_matrix(&[vec![1, 0, 1], vec![0, 1, 1]], 2).unwrap();
        let path = tmp("roundtrip.code");
        write_code_file(&path, &c).unwrap();
        let back = parse_code_file(&path).unwrap();
        assert_eq!((back.p, back.n, back.k), (c.p, c.n, c.k));
        assert_eq!(back.gf2_rows(), c.gf2_rows());
    }

    #[test]
    fn pdset_file_round_trip() {
        let pd = PDSet {
            perms: vec![Perm::identity(4), Perm::from_images(vec![1, 2, 3, 0]).unwrap()],
            info_set: vec![0, 2],
            t: 1,
        };
        let path = tmp("roundtrip.pdset");
        write_pdset_file(&path, 4, &pd).unwrap();
        let (n, back) = parse_pdset_file(&path).unwrap();
        assert_eq!(n, 4);
        assert_eq!(back.perms, pd.perms);
        assert_eq!(back.info_set, pd.info_set);
        assert_eq!(back.t, 1);
    }

    #[test]
    fn design_file_round_trip() {
        let mut b1 = crate::bits::Bitset::new(4);
        b1.set(0);
        b1.set(1);
        let mut b2 = crate::bits::Bitset::new(4);
        b2.set(2);
        b2.set(3);
        let d = Design::new(4, vec![b1, b2]).unwrap();
        let path = tmp("roundtrip.design");
        write_design_file(&path, &d).unwrap();
        let back = parse_design_file(&path).unwrap();
        assert!(crate::designs::same_blocks(&d, &back));
    }

    #[test]
    fn graph_file_parsing() {
        let path = tmp("parse.graph");
        std::fs::write(&path, "p graph 3 2\n1 2\n2 3\n").unwrap();
        let g = parse_graph_file(&path).unwrap();
        assert_eq!(g.n, 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
        std::fs::write(&path, "p graph 3 2\n1 2\n").unwrap();
        assert!(parse_graph_file(&path).is_err());
        std::fs::write(&path, "p graph 3 1\n1 4\n").unwrap();
        assert!(parse_graph_file(&path).is_err());
    }
}
