#ifndef FEXT_REGISTRY_HPP
#define FEXT_REGISTRY_HPP

#include "fext/core.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fext {

template <class S>
using Function = std::function<std::complex<S>(const S&)>;

enum class Regularity { Entire, Meromorphic, Finite };

struct TestFunction {
  std::string name;
  std::string formula;
  Regularity regularity = Regularity::Entire;
  std::complex<double> singularity{};
  Function<double> eval;
  Function<mp_real> eval_mp;

  template <class S>
  const Function<S>& as() const {
    if constexpr (is_extended<S>::value)
      return eval_mp;
    else
      return eval;
  }

  // Empty for functions of finite regularity on [-1,1].
  std::optional<AnalyticityInfo> analyticity(double T) const;
};

const TestFunction& lookup(std::string_view name);
const std::vector<TestFunction>& registry();
std::vector<std::string> registry_names();

}  // namespace fext

#endif
