#include "pagame/principal.hpp"

#include <algorithm>
#include <cmath>

namespace pagame {

int PrincipalLog::elimination_phase(ArmIndex arm) const {
  for (const PhaseLog& p : phases)
    if (std::find(p.eliminated.begin(), p.eliminated.end(), arm) != p.eliminated.end()) return p.phase;
  return 0;
}

std::size_t scaled_count(double raw, double gamma) {
  const double v = std::ceil(gamma * raw);
  return v < 1.0 ? 1 : static_cast<std::size_t>(v);
}

void move_arm(ArmList& from, ArmList& to, ArmIndex arm) {
  from.erase(std::remove(from.begin(), from.end(), arm), from.end());
  to.push_back(arm);
}

}  // namespace pagame
