use super::{parse_group, parse_tuple, Group, GroupError, Result, TableGroup, Word};

/// Tuples `gs` in `g` and `hs` in `h` with equal quantifier-free types.
#[derive(Debug, Clone)]
pub struct Recipe {
    pub name: String,
    pub g: Group,
    pub gs: Vec<Word>,
    pub h: Group,
    pub hs: Vec<Word>,
}

/// Recipes over infinite groups, one per product construction.
pub const LEMMA_RECIPES: [&str; 5] = ["free-embed", "abelian-ambient", "freeprod-mixed", "direct-product", "graph-product"];

/// Every recipe name accepted by [`recipe_build`].
pub const RECIPES: [&str; 7] = [
    "free-embed",
    "abelian-ambient",
    "freeprod-mixed",
    "direct-product",
    "graph-product",
    "finite-relabel",
    "finite-subgroup",
];

fn from_text(name: &str, g: &str, gs: &str, h: &str, hs: &str) -> Result<Recipe> {
    let (g, h) = (parse_group(g)?, parse_group(h)?);
    let gs = parse_tuple(&g, gs)?;
    let hs = parse_tuple(&h, hs)?;
    Ok(Recipe { name: name.to_string(), g, gs, h, hs })
}

/// The Klein four-group on `x, y, e, z`, with the identity stored third.
fn klein_relabelled() -> Result<TableGroup> {
    // Indices: 0 = x, 1 = y, 2 = e, 3 = z.
    let table = vec![vec![2, 3, 0, 1], vec![3, 2, 1, 0], vec![0, 1, 2, 3], vec![1, 0, 3, 2]];
    Ok(TableGroup::new(["x", "y", "e", "z"].map(String::from).to_vec(), table)?.with_label("klein(x,y,z)"))
}

pub fn recipe_build(name: &str) -> Result<Recipe> {
    match name {
        "free-embed" => from_text(name, "free(2)", "a, b", "free(3)", "a, b"),
        "abelian-ambient" => from_text(name, "Z^2", "e1, e2", "Z^3", "e1, e2"),
        "freeprod-mixed" => from_text(name, "freeprod(free(1),cyclic(2))", "a, t", "freeprod(free(2),cyclic(2))", "a, t"),
        "direct-product" => from_text(name, "prod(free(2),Z)", "1:a*2:1, 1:b", "prod(free(3),Z^2)", "1:a*2:e1, 1:b"),
        "graph-product" => from_text(
            name,
            "graphprod(path(3),Z^2,cyclic(4),free(2))",
            "1:e1*2:t2, 3:a*2:t2, 3:b",
            "graphprod(path(3),Z,cyclic(2),free(3))",
            "1:1*2:t, 3:a*2:t, 3:b",
        ),
        "finite-relabel" => {
            let g = parse_group("prod(cyclic(2),cyclic(2))")?;
            let gs = parse_tuple(&g, "1:t, 2:t")?;
            let h = Group::table(klein_relabelled()?);
            let hs = parse_tuple(&h, "y, z")?;
            Ok(Recipe { name: name.to_string(), g, gs, h, hs })
        }
        "finite-subgroup" => from_text(name, "cyclic(4)", "t2", "cyclic(6)", "t3"),
        _ => Err(GroupError::UnknownRecipe(name.to_string())),
    }
}
