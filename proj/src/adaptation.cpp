#include "mixlid/adaptation.hpp"

#include "mixlid/io.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mixlid {

void AdaptConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (ct && (std::isnan(*ct) || *ct < 0.0)) {
    throw std::invalid_argument("confidence threshold must be >= 0");
  }
}

void write_trace(std::ostream& out, const std::vector<AdoptionEvent>& trace) {
  for (const auto& e : trace) {
    out << e.iteration << '\t' << e.doc_id << '\t' << e.predicted << '\t'
        << format_double(e.margin) << '\t' << (e.adopted ? 1 : 0) << '\n';
  }
}

}  // namespace mixlid
