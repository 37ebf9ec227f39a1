#include "mracsim/scenario.hpp"

namespace mracsim {

namespace {

const char kPaperSec4[] = R"CFG(# Seven-state lateral-directional case study with two actuated channels.
# Constraint set: ||x|| <= 2, ||u|| <= 2.5, reference bound alpha1 = 1.5,
# derived tracking-error bound k_b = 0.5.
name = "paper_sec4"
controller = "constrained"

[plant]
A = [
  [-0.322, 0.064, 0.0364, -0.9917, 0.0003, 0.0008, 0.0],
  [0.0, 0.0, 1.0, 0.0037, 0.0, 0.0, 0.0],
  [-30.6492, 0.0, -3.6784, 0.6646, -0.7333, 0.1315, 0.0],
  [8.5396, 0.0, -0.0254, -0.4764, -0.0319, -0.0620, 0.0],
  [0.0, 30.0, 0.0, 10.0, 20.2, 0.0, 0.0],
  [-1.0, 0.0, 10.0, 0.0, 0.0, 10.25, 0.0],
  [0.0, 0.0, 0.0, 12.2958, 0.0, 0.0, -1.0],
]
B = [
  [0.0, 0.0],
  [0.0, 0.0],
  [0.0, 0.0],
  [0.0, 0.0],
  [10.1, 0.0],
  [0.0, -4.25],
  [0.0, 0.0],
]

[reference]
A_r = [
  [-0.322, 0.064, 0.0364, -0.9917, 0.0003, 0.0008, 0.0],
  [0.0, 0.0, 1.0, 0.0037, 0.0, 0.0, 0.0],
  [-30.6492, 0.0, -3.6784, 0.6646, -0.7333, 0.1315, 0.0],
  [8.5396, 0.0, -0.0254, -0.4764, -0.0319, -0.0620, 0.0],
  [0.0, 0.0, 0.0, 0.0, -20.2, 0.0, 0.0],
  [0.0, 0.0, 0.0, 0.0, 0.0, -20.2, 0.0],
  [0.0, 0.0, 0.0, 12.2958, 0.0, 0.0, -1.0],
]
B_r = [
  [0.0, 0.0],
  [0.0, 0.0],
  [0.0, 0.0],
  [0.0, 0.0],
  [20.2, 0.0],
  [0.0, 20.2],
  [0.0, 0.0],
]

# r(t) = [exp(-t/10); exp(-t/20)]
[signal]
kind = "exp_decay"
amplitude = [1.0, 1.0]
tau = [10.0, 20.0]

[constraints]
beta = 2.0
alpha1 = 1.5
alpha2 = 30.0   # monitor-only bound on ||xr_dot||
u_max = 2.5

[lyapunov]
q_scale = 1.0   # Q = q_scale * I_n

[controller.classical]
gamma_x = [[25.0, 0.0], [0.0, 25.0]]
gamma_r = [[25.0, 0.0], [0.0, 25.0]]

[controller.constrained]
gamma_x = [[5.0, 0.0], [0.0, 5.0]]
gamma_r = [[5.0, 0.0], [0.0, 5.0]]
gamma_d = 1.0   # scalar c means c * I_n
gamma_1 = 1.0

[sim]
dt = 0.001
t_final = 40.0
x0 = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
xr0 = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
log_stride = 10
guard_epsilon = 1e-6
)CFG";

} // namespace

const char* bundled_scenario_text(const std::string& name) {
    if (name == "paper_sec4") return kPaperSec4;
    return nullptr;
}

} // namespace mracsim
