#pragma once

#include <stdexcept>
#include <string>

namespace indicial {

// Base class for all typed failures raised by the library. CLI maps these
// to exit code 3 (numerical stage), config parsing errors to exit code 2.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// boundary_algebra
struct incompatible_series_error : error { using error::error; };
struct unrepresentable_exponent_error : error { using error::error; };
struct eval_domain_error : error { using error::error; };

// characteristic
struct ellipticity_error : error { using error::error; };
struct sign_error : error { using error::error; };
struct varying_integer_part_error : error { using error::error; };
struct near_integer_exponent_error : error { using error::error; };
struct fit_error : error { using error::error; };

// ode_core
struct resonance_error : error { using error::error; };
struct unsupported_resonance_error : error { using error::error; };
struct integrability_error : error { using error::error; };
struct taylor_truncation_error : error { using error::error; };
struct quadrature_error : error { using error::error; };

// expansion_engine
struct characteristic_collision_error : error { using error::error; };
struct smoothness_budget_error : error { using error::error; };
struct non_convergent_term_error : error { using error::error; };
struct missing_probe_error : error { using error::error; };

// singular_integrals
struct parameter_error : error { using error::error; };
struct grid_error : error { using error::error; };
struct undefined_fit_error : error { using error::error; };

// fd_oracle
struct solver_error : error { using error::error; };
struct convergence_error : error { using error::error; };

// cli_reports
struct config_error : error { using error::error; };

} // namespace indicial
