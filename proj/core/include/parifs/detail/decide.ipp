#pragma once

#include "parifs/errors.hpp"

namespace parifs {

template <typename T>
T decide(const PrecisionPolicy& policy, const std::string& what,
         const std::function<std::optional<T>(mpfr_prec_t)>& probe) {
  for (mpfr_prec_t prec = policy.start; prec <= policy.cap; prec *= 2) {
    if (auto r = probe(prec)) return *r;
  }
  throw PrecisionUndecidable(what + " is undecidable at " + std::to_string(policy.cap) + " bits");
}

}  // namespace parifs
