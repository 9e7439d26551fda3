#include "dse/scheme.hpp"

namespace dse {

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::it_bound: return "it-bound";
    case SchemeId::bs_limit: return "bs";
    case SchemeId::bs_finite: return "bs-finite";
    case SchemeId::ls: return "ls";
    case SchemeId::lsblend: return "lsblend";
    case SchemeId::box_greedy: return "box";
    case SchemeId::box_bruteforce: return "box-bruteforce";
  }
  return "unknown";
}

std::string to_string(FillOrder order) {
  return order == FillOrder::sequential ? "sequential" : "max_available_power";
}

}  // namespace dse
