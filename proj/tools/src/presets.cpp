#include "presets.hpp"

namespace wqed::cli {

namespace {

// Excitation decay of the retarded emitter pair for several coupling
// efficiencies at fixed retardation.
constexpr const char* kFig1b = R"(model = two_atom
dt = 0.001
t_max_in_delays = 8
outputs = population, gamma_curve, fits

[two_atom]
gamma0 = 1
beta = 0.5
T = 1
phi = 0

[sweep]
parameter = two_atom.beta
values = 0.2, 0.5, 0.8
)";

// Same observable against the retardation at fixed coupling efficiency.
constexpr const char* kFig1c = R"(model = two_atom
dt = 0.001
t_max_in_delays = 8
outputs = population, gamma_curve, fits

[two_atom]
gamma0 = 1
beta = 0.5
T = 1
phi = 0

[sweep]
parameter = two_atom.T
values = 0.5, 1, 2
)";

// Space-time maps of the guided-field intensity.
constexpr const char* kFig2 = R"(model = two_atom
dt = 0.001
t_max_in_delays = 4
outputs = population, field_map

[two_atom]
gamma0 = 1
beta = 0.2
T = 1
phi = 0

[sweep]
parameter = two_atom.beta
values = 0.2, 0.5
)";

// Cavity-array emitter decay against coupling strength and mirror distance;
// the mirror ensemble keeps sqrt(N_B) g_B = 2J.
constexpr const char* kFig3b = R"(model = cavity_array
dt = 0.01
t_max_in_delays = 4
outputs = population, gamma_curve, fits

[cavity_array]
J = 1
delta_x = 10
N_A = 1
N_B = 1
g_A = 0.2
g_B_total = 2
gamma0 = 0.05
init = single_atom

[sweep]
parameter = cavity_array.g_A
values = 0.2, 0.4
parameter2 = cavity_array.delta_x
values2 = 10, 20
)";

// Ensemble-size and initial-state comparison at the emitter cavity.
constexpr const char* kFig3c = R"(model = cavity_array
dt = 0.01
t_max_in_delays = 4
outputs = population, gamma_curve, fits

[cavity_array]
J = 1
delta_x = 10
N_A = 1
N_B = 1
g_A = 0.2
g_B_total = 2
gamma0 = 0.05
init = single_atom

[sweep]
parameter = cavity_array.N_A
values = 1, 4
parameter2 = cavity_array.init
values2 = single_atom, superradiant
)";

// Photon distribution over the chain: standing wave pinned at the emitters.
constexpr const char* kFig4 = R"(model = cavity_array
dt = 0.01
t_max_in_delays = 4
outputs = population, photon_map

[cavity_array]
J = 1
delta_x = 10
N_A = 1
N_B = 1
g_A = 0.2
g_B_total = 2
gamma0 = 0.05
init = single_atom
)";

// Decay-rate table: fitted, characteristic-root and small-T rates over a
// (beta, T) grid.
constexpr const char* kRates = R"(model = two_atom
dt = 0.001
t_max_in_delays = 8
outputs = rates

[two_atom]
gamma0 = 1
beta = 0.5
T = 1
phi = 0

[sweep]
parameter = two_atom.beta
values = 0, 0.1, 0.3, 0.5, 0.7, 0.9
parameter2 = two_atom.T
values2 = 0.1, 0.5, 1, 2
)";

}  // namespace

std::optional<std::string> preset_config(const std::string& name) {
  if (name == "fig1b") return kFig1b;
  if (name == "fig1c") return kFig1c;
  if (name == "fig2") return kFig2;
  if (name == "fig3b") return kFig3b;
  if (name == "fig3c") return kFig3c;
  if (name == "fig4") return kFig4;
  if (name == "rates") return kRates;
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"fig1b", "fig1c", "fig2", "fig3b", "fig3c", "fig4", "rates"};
}

}  // namespace wqed::cli
