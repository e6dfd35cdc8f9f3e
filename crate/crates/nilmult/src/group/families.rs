//! Constructors for the group families in the corpus, the `family:params`
//! spec grammar, and multiplication-table file I/O.
//!
//! Every constructor realizes a presentation concretely on normal-form
//! elements and goes through full table validation, so a wrong rule cannot
//! produce a silently broken group.

use super::{FiniteGroup, GroupError};

fn bad(family: &'static str, reason: impl Into<String>) -> GroupError {
    GroupError::BadParameter {
        family,
        reason: reason.into(),
    }
}

/// Cyclic group of order n.
pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(bad("cyclic", "order must be positive"));
    }
    let table: Vec<u16> = (0..n)
        .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u16))
        .collect();
    FiniteGroup::from_table(format!("cyclic:{n}"), n, table)
}

/// Direct product, ordered pairs (a, b) with index a * |H| + b.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (g.order(), h.order());
    let order = n * m;
    let mut table = vec![0u16; order * order];
    for a1 in 0..n {
        for b1 in 0..m {
            for a2 in 0..n {
                for b2 in 0..m {
                    let i = a1 * m + b1;
                    let j = a2 * m + b2;
                    table[i * order + j] = (g.mul(a1, a2) * m + h.mul(b1, b2)) as u16;
                }
            }
        }
    }
    FiniteGroup::from_table(
        format!("product:{}+{}", g.label(), h.label()),
        order,
        table,
    )
    .expect("product of valid groups is valid")
}

/// Direct sum of cyclic groups of the given orders.
pub fn abelian_group(orders: &[usize]) -> Result<FiniteGroup, GroupError> {
    if orders.is_empty() {
        return Err(bad("abelian", "need at least one cyclic order"));
    }
    let mut g = cyclic(orders[0])?;
    for &n in &orders[1..] {
        g = direct_product(&g, &cyclic(n)?);
    }
    let label = format!(
        "abelian:{}",
        orders
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    g.set_label(label);
    Ok(g)
}

/// Elements a^i b^u with b a b^-1 = a^t, a of order n, b of order m_b,
/// and b^m_b = a^z (z = 0 for split extensions).
fn two_generator_metacyclic(
    label: String,
    n: usize,
    m_b: usize,
    t: usize,
    z: usize,
) -> Result<FiniteGroup, GroupError> {
    let order = n * m_b;
    // t^u mod n per u.
    let mut tu = vec![1usize; m_b];
    for u in 1..m_b {
        tu[u] = (tu[u - 1] * t) % n;
    }
    let idx = |i: usize, u: usize| i * m_b + u;
    let mut table = vec![0u16; order * order];
    for i in 0..n {
        for u in 0..m_b {
            for j in 0..n {
                for v in 0..m_b {
                    // (a^i b^u)(a^j b^v) = a^(i + j t^u) b^(u+v), with
                    // b^m_b = a^z folded in when u + v wraps.
                    let mut e = (i + j * tu[u]) % n;
                    let mut w = u + v;
                    if w >= m_b {
                        w -= m_b;
                        e = (e + z) % n;
                    }
                    table[idx(i, u) * order + idx(j, v)] = idx(e, w) as u16;
                }
            }
        }
    }
    FiniteGroup::from_table(label, order, table)
}

/// Dihedral group of the given order 2n (n >= 1).
pub fn dihedral(order: usize) -> Result<FiniteGroup, GroupError> {
    if order < 2 || order % 2 != 0 {
        return Err(bad("dihedral", "order must be even and at least 2"));
    }
    let n = order / 2;
    two_generator_metacyclic(format!("dihedral:{order}"), n, 2, (n - 1) % n.max(2), 0)
}

/// Generalized quaternion group of order 2^n, n >= 3.
pub fn generalized_quaternion(order: usize) -> Result<FiniteGroup, GroupError> {
    if order < 8 || !order.is_power_of_two() {
        return Err(bad("quaternion", "order must be 2^n with n >= 3"));
    }
    let n = order / 2;
    // b^2 = a^(n/2), b a b^-1 = a^-1.
    two_generator_metacyclic(format!("quaternion:{order}"), n, 2, n - 1, n / 2)
}

/// Semidihedral group of order 2^n, n >= 4: b a b^-1 = a^(2^(n-2) - 1).
pub fn semidihedral(order: usize) -> Result<FiniteGroup, GroupError> {
    if order < 16 || !order.is_power_of_two() {
        return Err(bad("semidihedral", "order must be 2^n with n >= 4"));
    }
    let n = order / 2;
    two_generator_metacyclic(format!("semidihedral:{order}"), n, 2, n / 2 - 1, 0)
}

/// Modular (maximal-cyclic) group of order p^n: b a b^-1 = a^(1 + p^(n-2)),
/// with n >= 3 for odd p and n >= 4 for p = 2.
pub fn modular_group(p: usize, n: u32) -> Result<FiniteGroup, GroupError> {
    let min_n = if p == 2 { 4 } else { 3 };
    if n < min_n {
        return Err(bad(
            "modular",
            format!("need n >= {min_n} for p = {p}"),
        ));
    }
    if !is_prime(p as u64) {
        return Err(bad("modular", format!("{p} is not prime")));
    }
    let cyc = p.pow(n - 1);
    let t = 1 + p.pow(n - 2);
    two_generator_metacyclic(format!("modular:{p},{n}"), cyc, p, t, 0)
}

/// Heisenberg group over Z_p: unitriangular 3x3 matrices, order p^3,
/// class 2, exponent p for odd p.
pub fn heisenberg(p: usize) -> Result<FiniteGroup, GroupError> {
    if !is_prime(p as u64) {
        return Err(bad("heisenberg", format!("{p} is not prime")));
    }
    let order = p * p * p;
    let idx = |x: usize, y: usize, z: usize| (x * p + y) * p + z;
    let mut table = vec![0u16; order * order];
    for x1 in 0..p {
        for y1 in 0..p {
            for z1 in 0..p {
                for x2 in 0..p {
                    for y2 in 0..p {
                        for z2 in 0..p {
                            // (x1,y1,z1)(x2,y2,z2) =
                            //   (x1+x2, y1+y2, z1+z2+x1*y2)
                            let i = idx(x1, y1, z1);
                            let j = idx(x2, y2, z2);
                            let k = idx(
                                (x1 + x2) % p,
                                (y1 + y2) % p,
                                (z1 + z2 + x1 * y2) % p,
                            );
                            table[i * order + j] = k as u16;
                        }
                    }
                }
            }
        }
    }
    FiniteGroup::from_table(format!("heisenberg:{p}"), order, table)
}

/// Extraspecial group of order p^3 and exponent p (odd p); for p = 2 this
/// is the dihedral group of order 8.
pub fn extraspecial_plus(p: usize) -> Result<FiniteGroup, GroupError> {
    if p == 2 {
        let mut g = dihedral(8)?;
        g.set_label("extraspecial+:2");
        return Ok(g);
    }
    let mut g = heisenberg(p)?;
    g.set_label(format!("extraspecial+:{p}"));
    Ok(g)
}

/// Extraspecial group of order p^3 and exponent p^2 (odd p); for p = 2 the
/// quaternion group of order 8.
pub fn extraspecial_minus(p: usize) -> Result<FiniteGroup, GroupError> {
    if p == 2 {
        let mut g = generalized_quaternion(8)?;
        g.set_label("extraspecial-:2");
        return Ok(g);
    }
    let mut g = modular_group(p, 3)?;
    g.set_label(format!("extraspecial-:{p}"));
    Ok(g)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parses the `family:params` grammar used by the CLI and the corpus:
/// `cyclic:6`, `abelian:4,2`, `dihedral:16`, `quaternion:8`,
/// `semidihedral:16`, `modular:3,3`, `heisenberg:3`, `extraspecial+:3`,
/// `extraspecial-:3`, `trivial`, and `product:<spec>+<spec>`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup, GroupError> {
    let spec = spec.trim();
    if spec == "trivial" {
        return cyclic(1).map(|mut g| {
            g.set_label("trivial");
            g
        });
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let parts: Vec<&str> = rest.split('+').collect();
        if parts.len() < 2 {
            return Err(bad("product", "need at least two factors joined by '+'"));
        }
        let mut factors = parts.into_iter().map(parse_group_spec);
        let mut g = factors.next().unwrap()?;
        for f in factors {
            g = direct_product(&g, &f?);
        }
        g.set_label(format!("product:{rest}"));
        return Ok(g);
    }
    let (family, params) = match spec.split_once(':') {
        Some((f, p)) => (f, p),
        None => (spec, ""),
    };
    let nums: Result<Vec<usize>, _> = params
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect();
    let nums = nums.map_err(|_| bad("spec", format!("bad numeric parameters in {spec:?}")))?;
    let one = |family: &'static str| -> Result<usize, GroupError> {
        if nums.len() == 1 {
            Ok(nums[0])
        } else {
            Err(bad(family, "expected exactly one parameter"))
        }
    };
    match family {
        "cyclic" => cyclic(one("cyclic")?),
        "abelian" => abelian_group(&nums),
        "dihedral" => dihedral(one("dihedral")?),
        "quaternion" => generalized_quaternion(one("quaternion")?),
        "semidihedral" => semidihedral(one("semidihedral")?),
        "modular" => {
            if nums.len() != 2 {
                return Err(bad("modular", "expected modular:p,n"));
            }
            modular_group(nums[0], nums[1] as u32)
        }
        "heisenberg" => heisenberg(one("heisenberg")?),
        "extraspecial+" | "extraspecial_plus" => extraspecial_plus(one("extraspecial+")?),
        "extraspecial-" | "extraspecial_minus" => extraspecial_minus(one("extraspecial-")?),
        other => Err(bad("spec", format!("unknown family {other:?}"))),
    }
}

/// Parses the multiplication-table file format: line 1 the order n, then n
/// lines of n space-separated 0-based element indices, identity = 0.
pub fn parse_table_file(text: &str, label: impl Into<String>) -> Result<FiniteGroup, GroupError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| GroupError::BadTableFile("empty file".into()))?
        .trim()
        .parse()
        .map_err(|_| GroupError::BadTableFile("first line must be the order".into()))?;
    let mut table = Vec::with_capacity(order * order);
    for i in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| GroupError::BadTableFile(format!("missing row {i}")))?;
        let row: Result<Vec<u16>, _> = line.split_whitespace().map(|t| t.parse()).collect();
        let row = row.map_err(|_| GroupError::BadTableFile(format!("bad entry in row {i}")))?;
        if row.len() != order {
            return Err(GroupError::BadTableFile(format!(
                "row {i} has {} entries, expected {order}",
                row.len()
            )));
        }
        table.extend(row);
    }
    if lines.next().is_some() {
        return Err(GroupError::BadTableFile("trailing content".into()));
    }
    let g = FiniteGroup::from_table(label, order, table)?;
    if g.table()[0] != 0 {
        return Err(GroupError::BadTableFile("element 0 must be the identity".into()));
    }
    Ok(g)
}

/// Emits the table file format.
pub fn format_table_file(g: &FiniteGroup) -> String {
    let n = g.order();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| g.mul(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
