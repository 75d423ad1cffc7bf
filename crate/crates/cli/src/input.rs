//! Reading the JSON input format into validated domain objects.
//!
//! Every failure carries a JSON pointer into the input document.

use eqstack::cartan::{check_matrix_group, validate_gdga, Gdga, LieAlgebraData, WeylAction};
use eqstack::exactalg::{Field, Mat};
use eqstack::groupcoh::GModule;
use eqstack::homalg::CoefficientComplex;
use eqstack::simplicial::{Coefficients, FiniteCategory, FiniteGroupoid};
use eqstack::stackact::{FiniteGroup, GroupoidAction};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// A value in the input document together with its JSON pointer.
#[derive(Clone, Copy)]
pub struct Node<'a> {
    value: &'a Value,
    pointer: Pointer<'a>,
}

#[derive(Clone, Copy)]
enum Pointer<'a> {
    Root,
    Key(&'a Node<'a>, &'a str),
    Index(&'a Node<'a>, usize),
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node {
            value,
            pointer: Pointer::Root,
        }
    }

    pub fn pointer(&self) -> String {
        match self.pointer {
            Pointer::Root => String::new(),
            Pointer::Key(parent, key) => format!("{}/{}", parent.pointer(), escape(key)),
            Pointer::Index(parent, i) => format!("{}/{i}", parent.pointer()),
        }
    }

    fn error(&self, message: impl Into<String>) -> CliError {
        let p = self.pointer();
        CliError::schema(if p.is_empty() { "/".into() } else { p }, message)
    }

    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| self.error("expected an object"))
    }

    fn array(&self) -> Result<&'a Vec<Value>> {
        self.value.as_array().ok_or_else(|| self.error("expected an array"))
    }

    pub fn get<'b>(&'b self, key: &'b str) -> Result<Option<Node<'b>>> {
        Ok(self.object()?.get(key).map(|value| Node {
            value,
            pointer: Pointer::Key(self, key),
        }))
    }

    pub fn require<'b>(&'b self, key: &'b str) -> Result<Node<'b>> {
        self.get(key)?.ok_or_else(|| self.error(format!("missing field \"{key}\"")))
    }

    pub fn items<'b>(&'b self) -> Result<Vec<Node<'b>>> {
        Ok(self
            .array()?
            .iter()
            .enumerate()
            .map(|(i, value)| Node {
                value,
                pointer: Pointer::Index(self, i),
            })
            .collect())
    }

    pub fn items_of_len<'b>(&'b self, len: usize, what: &str) -> Result<Vec<Node<'b>>> {
        let items = self.items()?;
        if items.len() != len {
            return Err(self.error(format!("expected {len} {what}, found {}", items.len())));
        }
        Ok(items)
    }

    pub fn entries<'b>(&'b self) -> Result<Vec<(&'b str, Node<'b>)>> {
        Ok(self
            .object()?
            .iter()
            .map(|(k, value)| {
                (
                    k.as_str(),
                    Node {
                        value,
                        pointer: Pointer::Key(self, k.as_str()),
                    },
                )
            })
            .collect())
    }

    pub fn usize(&self) -> Result<usize> {
        self.value
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| self.error("expected a nonnegative integer"))
    }

    pub fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.error("expected a string"))
    }

    pub fn is_null(&self) -> bool {
        self.value.is_null()
    }

    /// An index given either as an integer below `names.len()` or as one of
    /// the names.
    pub fn index_in(&self, names: &[String]) -> Result<usize> {
        if let Some(s) = self.value.as_str() {
            return names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| self.error(format!("unknown name \"{s}\"")));
        }
        let i = self.usize()?;
        if i >= names.len() {
            return Err(self.error(format!("index {i} out of range (have {})", names.len())));
        }
        Ok(i)
    }

    /// A field element: an integer, or a string `"a"` or `"a/b"`.
    pub fn elem<F: Field>(&self, f: &F) -> Result<F::Elem> {
        if let Some(v) = self.value.as_i64() {
            return Ok(f.from_i64(v));
        }
        let s = self
            .value
            .as_str()
            .ok_or_else(|| self.error("expected an integer or a string \"a/b\""))?;
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let parse = |t: &str| t.parse::<i64>().map_err(|_| self.error(format!("\"{s}\" is not a 64-bit fraction")));
        let (num, den) = (parse(num)?, parse(den)?);
        f.div(&f.from_i64(num), &f.from_i64(den))
            .ok_or_else(|| self.error(format!("denominator of \"{s}\" is zero in {}", f.name())))
    }

    /// A dense matrix given as `rows` arrays of `cols` entries.
    pub fn matrix<F: Field>(&self, f: &F, rows: usize, cols: usize) -> Result<Mat<F>> {
        let mut entries = Vec::with_capacity(rows);
        for row in self.items_of_len(rows, "rows")? {
            let row_entries = row.items_of_len(cols, "entries")?;
            entries.push(row_entries.iter().map(|e| e.elem(f)).collect::<Result<Vec<_>>>()?);
        }
        Mat::from_dense(f, rows, cols, &entries).map_err(|e| CliError::invalid(&self.pointer(), e))
    }
}

/// Which optional objects a document contains, after validation.
pub struct Input<F: Field> {
    pub field: F,
    pub atlas: Option<FiniteCategory>,
    pub action: Option<GroupoidAction>,
    pub coefficients: Coefficients<F>,
    pub coefficient_complex: Option<CoefficientComplex<F>>,
    pub lie: Option<LieAlgebraData<F>>,
    pub gdga: Option<Gdga<F>>,
    pub weyl: Option<WeylAction<F>>,
    /// Human-readable names of the checks that were run.
    pub validated: Vec<String>,
}

impl<F: Field> Input<F> {
    pub fn require_action(&self) -> Result<&GroupoidAction> {
        self.action
            .as_ref()
            .ok_or_else(|| CliError::schema("/", "this job needs \"group\" and \"groupoid\""))
    }

    pub fn require_atlas(&self) -> Result<&FiniteCategory> {
        self.atlas.as_ref().ok_or_else(|| CliError::schema("/", "this job needs \"groupoid\""))
    }

    pub fn require_cartan(&self) -> Result<(&LieAlgebraData<F>, &Gdga<F>)> {
        match (&self.lie, &self.gdga) {
            (Some(g), Some(a)) => Ok((g, a)),
            _ => Err(CliError::schema("/", "this job needs \"lie\" and \"gdga\"")),
        }
    }
}

/// Reads the field named in `/coefficients`, if any: `("Q", None)` or
/// `("Fp", Some(p))`.
pub fn declared_field(doc: &Value) -> Result<Option<(String, Option<u64>)>> {
    let root = Node::root(doc);
    let Some(c) = root.get("coefficients")? else {
        return Ok(None);
    };
    let Some(name) = c.get("field")? else {
        return Ok(None);
    };
    let p = match c.get("p")? {
        Some(p) => Some(p.usize()? as u64),
        None => None,
    };
    Ok(Some((name.str()?.to_string(), p)))
}

/// Parses and validates everything in the document over `field`.
pub fn parse<F: Field>(doc: &Value, field: F) -> Result<Input<F>> {
    let root = Node::root(doc);
    root.object()?;
    let mut validated = Vec::new();

    let group = match root.get("group")? {
        Some(g) => {
            let group = parse_group(&g)?;
            validated.push(format!("group axioms ({} elements)", group.order()));
            Some(group)
        }
        None => None,
    };

    let atlas = match root.get("groupoid")? {
        Some(node) => {
            let (cat, is_groupoid) = parse_category(&node)?;
            validated.push(format!(
                "{} axioms ({} objects, {} morphisms)",
                if is_groupoid { "groupoid" } else { "category" },
                cat.num_objects(),
                cat.num_morphisms()
            ));
            Some(cat)
        }
        None => None,
    };

    let action = match (&group, &atlas, root.get("action")?) {
        (Some(g), Some(c), Some(node)) => {
            let a = parse_action(&node, g, c)?;
            validated.push("functoriality of the action".into());
            Some(a)
        }
        (Some(g), Some(c), None) => Some(GroupoidAction::trivial(g.clone(), c.clone())),
        (_, _, Some(node)) => return Err(node.error("an action needs both \"group\" and \"groupoid\"")),
        _ => None,
    };

    let mut coefficients = Coefficients::Field(field.clone());
    let mut coefficient_complex = None;
    if let Some(c) = root.get("coefficients")? {
        if let Some(m) = c.get("module")? {
            let g = group.as_ref().ok_or_else(|| m.error("a coefficient module needs \"group\""))?;
            let module = parse_module(&m, &field, g)?;
            validated.push(format!("G-module ({}-dimensional)", module.dim()));
            coefficients = Coefficients::Module(module);
        }
        if let Some(cx) = c.get("complex")? {
            let g = group.as_ref().ok_or_else(|| cx.error("a coefficient complex needs \"group\""))?;
            let complex = parse_coefficient_complex(&cx, &field, g)?;
            validated.push(format!("coefficient complex ({} terms, equivariant, d² = 0)", complex.top() + 1));
            coefficient_complex = Some(complex);
        }
    }

    let lie = match root.get("lie")? {
        Some(node) => {
            let g = parse_lie(&node, &field)?;
            validated.push(format!("Lie algebra (dim {}, antisymmetry, Jacobi)", g.dim()));
            Some(g)
        }
        None => None,
    };

    let gdga = match root.get("gdga")? {
        Some(node) => {
            let g = lie.as_ref().ok_or_else(|| node.error("a g-DGA needs \"lie\""))?;
            let a = parse_gdga(&node, &field, g.dim())?;
            let report = validate_gdga(g, &a);
            if !report.is_valid() {
                return Err(CliError::invalid(&node.pointer(), eqstack::error::Error::invariant("", report.to_string())));
            }
            validated.push(format!("Cartan calculus ({} identities checked)", report.checked));
            Some(a)
        }
        None => None,
    };

    let weyl = match root.get("weyl")? {
        Some(node) => {
            let (g, a) = match (&lie, &gdga) {
                (Some(g), Some(a)) => (g, a),
                _ => return Err(node.error("Weyl data needs \"lie\" and \"gdga\"")),
            };
            let on_dual = node
                .items()?
                .iter()
                .map(|m| m.matrix(&field, g.dim(), g.dim()))
                .collect::<Result<Vec<_>>>()?;
            check_matrix_group(&field, g.dim(), &on_dual).map_err(|e| CliError::invalid("", e))?;
            let n = a.total_dim();
            let on_algebra = match root.get("weyl_gdga")? {
                Some(wa) => wa
                    .items_of_len(on_dual.len(), "matrices")?
                    .iter()
                    .map(|m| m.matrix(&field, n, n))
                    .collect::<Result<Vec<_>>>()?,
                None => vec![Mat::identity(&field, n); on_dual.len()],
            };
            validated.push(format!("Weyl group ({} elements)", on_dual.len()));
            Some(WeylAction { on_dual, on_algebra })
        }
        None => None,
    };

    Ok(Input {
        field,
        atlas,
        action,
        coefficients,
        coefficient_complex,
        lie,
        gdga,
        weyl,
        validated,
    })
}

fn names(node: &Node<'_>) -> Result<Vec<String>> {
    node.items()?
        .iter()
        .map(|n| match n.value {
            Value::String(s) => Ok(s.clone()),
            Value::Number(v) => Ok(v.to_string()),
            _ => Err(n.error("expected a name")),
        })
        .collect()
}

fn parse_group(node: &Node<'_>) -> Result<FiniteGroup> {
    let elements = node.require("elements")?;
    let names = names(&elements)?;
    let mul_node = node.require("mul")?;
    let mut mul = Vec::with_capacity(names.len());
    for row in mul_node.items_of_len(names.len(), "rows")? {
        mul.push(
            row.items_of_len(names.len(), "entries")?
                .iter()
                .map(|e| e.index_in(&names))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    FiniteGroup::new(names, mul).map_err(|e| CliError::invalid("", e))
}

fn parse_category(node: &Node<'_>) -> Result<(FiniteCategory, bool)> {
    let is_groupoid = match node.get("kind")? {
        None => true,
        Some(k) => match k.str()? {
            "groupoid" => true,
            "category" => false,
            other => return Err(k.error(format!("unknown kind \"{other}\" (expected \"groupoid\" or \"category\")"))),
        },
    };
    let objects = names(&node.require("objects")?)?;
    let morphisms = node.require("morphisms")?;
    let (mut src, mut tgt) = (Vec::new(), Vec::new());
    for m in morphisms.items()? {
        src.push(m.require("src")?.index_in(&objects)?);
        tgt.push(m.require("tgt")?.index_in(&objects)?);
    }
    let n = src.len();
    let comp_node = node.require("comp")?;
    let mut comp = Vec::with_capacity(n);
    for row in comp_node.items_of_len(n, "rows")? {
        let mut out = Vec::with_capacity(n);
        for e in row.items_of_len(n, "entries")? {
            out.push(if e.is_null() { None } else { Some(e.usize()?) });
        }
        comp.push(out);
    }
    let base = node.pointer();
    let cat = FiniteCategory::new(objects, src, tgt, comp).map_err(|e| CliError::invalid(&base, e))?;
    if is_groupoid {
        FiniteGroupoid::new(cat.clone()).map_err(|e| CliError::invalid(&base, e))?;
    }
    Ok((cat, is_groupoid))
}

/// A map `element name → permutation`, with every element present.
fn per_element(node: &Node<'_>, group: &FiniteGroup, len: usize) -> Result<Vec<Vec<usize>>> {
    let mut rows: Vec<Option<Vec<usize>>> = vec![None; group.order()];
    for (name, perm) in node.entries()? {
        let g = group
            .names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| perm.error(format!("\"{name}\" is not a group element")))?;
        let mut row = Vec::with_capacity(len);
        for e in perm.items_of_len(len, "images")? {
            let y = e.usize()?;
            if y >= len {
                return Err(e.error(format!("image {y} out of range")));
            }
            row.push(y);
        }
        rows[g] = Some(row);
    }
    rows.into_iter()
        .enumerate()
        .map(|(g, r)| r.ok_or_else(|| node.error(format!("no entry for element \"{}\"", group.names()[g]))))
        .collect()
}

fn parse_action(node: &Node<'_>, group: &FiniteGroup, atlas: &FiniteCategory) -> Result<GroupoidAction> {
    let on_obj = per_element(&node.require("on_objects")?, group, atlas.num_objects())?;
    let result = match node.get("on_morphisms")? {
        Some(m) => {
            let on_mor = per_element(&m, group, atlas.num_morphisms())?;
            GroupoidAction::new(group.clone(), atlas.clone(), on_obj, on_mor)
        }
        None => GroupoidAction::from_object_action(group.clone(), atlas.clone(), on_obj),
    };
    result.map_err(|e| CliError::invalid("", e))
}

fn parse_module<F: Field>(node: &Node<'_>, f: &F, group: &FiniteGroup) -> Result<GModule<F>> {
    let dim = node.require("dim")?.usize()?;
    let rho = match node.get("rho")? {
        None => return Ok(GModule::trivial(f, group, dim)),
        Some(r) => r,
    };
    let mut mats: Vec<Option<Mat<F>>> = vec![None; group.order()];
    for (name, m) in rho.entries()? {
        let g = group
            .names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| m.error(format!("\"{name}\" is not a group element")))?;
        mats[g] = Some(m.matrix(f, dim, dim)?);
    }
    // Missing elements act trivially only if that is what the group law forces.
    let mats = mats
        .into_iter()
        .enumerate()
        .map(|(g, m)| match m {
            Some(m) => Ok(m),
            None if g == group.identity() => Ok(Mat::identity(f, dim)),
            None => Err(rho.error(format!("no matrix for element \"{}\"", group.names()[g]))),
        })
        .collect::<Result<Vec<_>>>()?;
    GModule::new(f, group, mats).map_err(|e| CliError::invalid(&node.pointer(), e))
}

fn parse_coefficient_complex<F: Field>(node: &Node<'_>, f: &F, group: &FiniteGroup) -> Result<CoefficientComplex<F>> {
    let modules = node
        .require("modules")?
        .items()?
        .iter()
        .map(|m| parse_module(m, f, group))
        .collect::<Result<Vec<_>>>()?;
    let diffs = match node.get("d")? {
        Some(d) => d
            .items_of_len(modules.len().saturating_sub(1), "differentials")?
            .iter()
            .enumerate()
            .map(|(c, m)| m.matrix(f, modules[c + 1].dim(), modules[c].dim()))
            .collect::<Result<Vec<_>>>()?,
        None => (1..modules.len())
            .map(|c| Mat::zeros(f, modules[c].dim(), modules[c - 1].dim()))
            .collect(),
    };
    CoefficientComplex::new(modules, diffs).map_err(|e| CliError::invalid("", e))
}

fn parse_lie<F: Field>(node: &Node<'_>, f: &F) -> Result<LieAlgebraData<F>> {
    let dim = node.require("dim")?.usize()?;
    let labels = match node.get("labels")? {
        Some(l) => {
            let l2 = names(&l)?;
            if l2.len() != dim {
                return Err(l.error(format!("expected {dim} labels")));
            }
            l2
        }
        None => (1..=dim).map(|i| format!("ξ{i}")).collect(),
    };
    let mut entries = Vec::new();
    if let Some(s) = node.get("structure")? {
        for e in s.items()? {
            let parts = e.items_of_len(4, "components [a, b, c, value]")?;
            let idx = |k: usize| parts[k].index_in(&labels);
            entries.push((idx(0)?, idx(1)?, idx(2)?, parts[3].elem(f)?));
        }
    }
    LieAlgebraData::new(f, labels, &entries).map_err(|e| CliError::invalid("", e))
}

/// Places per-degree blocks into one operator on the whole algebra.
/// `blocks[m]` maps degree `m` to degree `m + shift`.
fn assemble<F: Field>(f: &F, offsets: &[usize], blocks: &[(usize, Mat<F>)], shift: isize) -> Mat<F> {
    let n = *offsets.last().unwrap();
    let mut t = Vec::new();
    for (m, b) in blocks {
        let target = (*m as isize + shift) as usize;
        b.push_block(offsets[target], offsets[*m], &f.one(), &mut t);
    }
    Mat::from_triplets(f, n, n, t)
}

fn parse_gdga<F: Field>(node: &Node<'_>, f: &F, k: usize) -> Result<Gdga<F>> {
    let dims_node = node.require("dims")?;
    let dims = dims_node.items()?.iter().map(|d| d.usize()).collect::<Result<Vec<_>>>()?;
    if dims.is_empty() {
        return Err(dims_node.error("a g-DGA needs at least degree 0"));
    }
    let top = dims.len() - 1;
    let mut offsets = vec![0];
    for d in &dims {
        offsets.push(offsets.last().unwrap() + d);
    }
    let n = *offsets.last().unwrap();

    let up = |node: Node<'_>| -> Result<Mat<F>> {
        let blocks = node
            .items_of_len(top, "blocks (one per degree below the top)")?
            .iter()
            .enumerate()
            .map(|(m, b)| Ok((m, b.matrix(f, dims[m + 1], dims[m])?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(assemble(f, &offsets, &blocks, 1))
    };
    let d = match node.get("d")? {
        Some(d) => up(d)?,
        None => Mat::zeros(f, n, n),
    };

    let iota = match node.get("iota")? {
        Some(list) => list
            .items_of_len(k, "contractions")?
            .into_iter()
            .map(|per| {
                let blocks = per
                    .items_of_len(top, "blocks (one per degree above zero)")?
                    .iter()
                    .enumerate()
                    .map(|(m, b)| Ok((m + 1, b.matrix(f, dims[m], dims[m + 1])?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(assemble(f, &offsets, &blocks, -1))
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![Mat::zeros(f, n, n); k],
    };

    let lie = match node.get("L")? {
        Some(list) => Some(
            list.items_of_len(k, "Lie derivatives")?
                .into_iter()
                .map(|per| {
                    let blocks = per
                        .items_of_len(top + 1, "blocks (one per degree)")?
                        .iter()
                        .enumerate()
                        .map(|(m, b)| Ok((m, b.matrix(f, dims[m], dims[m])?)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(assemble(f, &offsets, &blocks, 0))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };

    let mul = match node.get("mul")? {
        Some(list) => {
            let mut table = vec![vec![Vec::new(); n]; n];
            for e in list.items()? {
                let parts = e.items_of_len(4, "components [i, j, k, value]")?;
                let mut idx = [0; 3];
                for (slot, part) in idx.iter_mut().zip(&parts) {
                    *slot = part.usize()?;
                    if *slot >= n {
                        return Err(part.error(format!("basis index out of range (dimension {n})")));
                    }
                }
                let v = parts[3].elem(f)?;
                let cell: &mut Vec<(usize, F::Elem)> = &mut table[idx[0]][idx[1]];
                match cell.iter_mut().find(|(c, _)| *c == idx[2]) {
                    Some((_, x)) => *x = f.add(x, &v),
                    None => cell.push((idx[2], v)),
                }
            }
            for row in &mut table {
                for cell in row.iter_mut() {
                    cell.retain(|(_, x)| !f.is_zero(x));
                    cell.sort_by_key(|(c, _)| *c);
                }
            }
            Some(table)
        }
        None => None,
    };

    Gdga::new(f, dims, d, iota, lie, mul).map_err(|e| CliError::invalid(&node.pointer(), e))
}
