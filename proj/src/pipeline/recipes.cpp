#include "qlrsim/pipeline/recipes.hpp"

namespace qlrsim::pipeline {

namespace {

std::vector<Recipe> make_recipes() {
  return {
      {"table1", "H2 at 0.7 A: FCI, q-sc-EOM, q-proj-EOM and qEOM for the three lowest states",
       R"(name = "table1"

[molecule]
builder = "h2"
params = { bond = 0.7 }
gauge_origin = "origin"  # dipole origin on the first H atom

[methods]
eom = ["qeom", "sc", "proj"]
qeom_normalization = "eigenvector"
states = 3

[report]
table1 = true
)"},
      {"h2-ee", "H2 excitation energies, 0.5-2.5 A (21 points)",
       R"(name = "h2-ee"

[molecule]
builder = "h2"

[methods]
eom = ["qeom", "sc", "proj"]

[scan]
parameter = "bond"
start = 0.5
stop = 2.5
points = 21
)"},
      {"h2-polar", "H2 polarizability at 589 nm, 0.5-2.5 A (21 points)",
       R"(name = "h2-polar"

[molecule]
builder = "h2"

[methods]
eom = []
qlr = ["sc", "proj"]

[response]
wavelengths_nm = [589.0]

[scan]
parameter = "bond"
start = 0.5
stop = 2.5
points = 21
)"},
      {"lih-ee", "LiH excitation energies, 1.5-4.0 A in 0.05 A steps",
       R"(name = "lih-ee"

[molecule]
builder = "lih"

[methods]
eom = ["qeom", "sc", "proj"]
states = 8

[scan]
parameter = "bond"
start = 1.5
stop = 4.0
points = 51
)"},
      {"lih-polar", "LiH polarizability at 589 nm in the three windows away from the S1 resonances",
       R"(name = "lih-polar"

[molecule]
builder = "lih"

[methods]
eom = []
qlr = ["sc", "proj"]

[response]
wavelengths_nm = [589.0]

[scan]
parameter = "bond"
values = [1.5, 1.55, 1.6, 1.65, 1.7, 1.75, 1.8, 1.85, 1.9, 1.95, 2.0, 2.05, 2.1, 2.15, 2.2, 2.25, 2.3, 2.35,
          2.4, 2.45, 2.5, 2.55,
          2.8, 2.85, 2.9, 2.95, 3.0, 3.05, 3.1, 3.15, 3.2, 3.25,
          3.5, 3.55, 3.6, 3.65, 3.7, 3.75, 3.8, 3.85, 3.9, 3.95, 4.0]
)"},
      {"h2o-polar", "H2O polarizability at 589 nm, symmetric O-H stretch at 104.5 degrees",
       R"(name = "h2o-polar"

[molecule]
builder = "h2o"
params = { angle = 104.5 }

[methods]
eom = []
qlr = ["sc", "proj"]

[response]
wavelengths_nm = [589.0]

[scan]
parameter = "oh_bond"
values = [0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0, 2.1]
)"},
      {"h4-chiral-rotation", "(H2)2 specific rotation at 589 nm, dihedral 0-180 degrees",
       R"(name = "h4-chiral-rotation"

[molecule]
builder = "h2-dimer"
params = { bond = 0.75, separation = 1.5 }

[methods]
eom = []
qlr = ["sc", "proj"]

[response]
wavelengths_nm = [589.0]
rotation = true

[scan]
parameter = "dihedral"
start = 0.0
stop = 180.0
points = 19
)"},
      {"h2o-spectrum", "H2O absorption spectrum (oscillator strengths, Lorentzian broadening)",
       R"(name = "h2o-spectrum"

[molecule]
builder = "h2o"

[methods]
eom = ["sc", "proj"]

[spectrum]
lineshape = "lorentzian"
fwhm_hartree = 0.01
points = 2001
)"},
      {"h4-ecd", "(H2)2 at 60 degrees: rotatory strengths and ECD spectrum",
       R"(name = "h4-ecd"

[molecule]
builder = "h2-dimer"
params = { bond = 0.75, separation = 1.5, dihedral = 60.0 }

[methods]
eom = ["sc", "proj"]

[spectrum]
lineshape = "lorentzian"
fwhm_hartree = 0.01
points = 2001
)"},
      {"h6-noise", "Linear H6 (4 A): matrix-element noise on the three lowest excitation energies",
       R"(name = "h6-noise"

[molecule]
builder = "h-chain"
params = { atoms = 6, spacing = 4.0 }

[methods]
eom = ["sc", "proj", "qse"]
states = 3

[noise]
kind = "matrix-element"
magnitudes = [1e-6, 1e-5, 1e-4, 1e-3]
trials = 1000
metric = ["noisy", "exact"]
states = 3
)"},
  };
}

}  // namespace

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> all = make_recipes();
  return all;
}

bool is_recipe(const std::string& name) {
  for (const auto& r : recipes())
    if (r.name == name) return true;
  return false;
}

const Recipe& find_recipe(const std::string& name) {
  for (const auto& r : recipes())
    if (r.name == name) return r;
  throw ConfigError("unknown recipe '" + name + "' (see: qlrsim recipes list)");
}

RunConfig recipe_config(const std::string& name) {
  auto c = parse_config(find_recipe(name).toml);
  c.output_dir = name;
  return c;
}

}  // namespace qlrsim::pipeline
