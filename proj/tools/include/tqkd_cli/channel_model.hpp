#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tqkd/keyrate.hpp"
#include "tqkd/qmath.hpp"

namespace tqkd::cli {

/// Bad flags or names; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelOptions {
  int dim = 0;                     // only consulted by channels of selectable dimension
  std::int64_t samples = 100000;   // Monte Carlo draws for drift
  std::uint64_t seed = 0;
};

/// A named channel with one swept parameter; the other parameters are fixed at construction.
struct ChannelModel {
  std::string name;
  std::string parameter;  // name of the swept parameter
  double default_value = 0.0;
  int dim = 2;
  std::map<std::string, double> fixed;
  std::function<DensityMatrix(double)> joint_state;
};

/// Channel syntax: name[:value][:key=value]... A bare value sets the swept parameter's default.
/// Names: identity, ad-qubit, ad-qutrit, depolarizing, rotation, prob-rotation, pdl, pmd, drift.
ChannelModel make_channel_model(std::string_view spec, const ModelOptions& options);

std::vector<std::string> channel_names();

/// "start:stop:count" inclusive of both endpoints, count ≥ 2 (a single value is accepted when allow_single).
std::vector<double> parse_range(std::string_view text, bool allow_single = false);

std::vector<Protocol> parse_protocols(std::string_view text);

/// Evaluates one protocol on a joint state. The (d+1)-basis rate uses the error vectors and
/// key-basis mutual information of the predicted probability table.
KeyRateReport evaluate(Protocol protocol, const DensityMatrix& rho_ab);

}  // namespace tqkd::cli
