#include <algorithm>
#include <cmath>

#include "vertiopt/router.hpp"

namespace vertiopt {

TravelTimeField::TravelTimeField(const Network& network, double bin_size, double horizon)
    : bin_size_(bin_size),
      bins_(static_cast<std::size_t>(std::ceil(horizon / bin_size))) {
  if (!(bin_size > 0.0) || bins_ == 0) throw ValidationError("travel time field: bad binning");
  freespeed_.reserve(network.link_count());
  for (const Link& l : network.links()) freespeed_.push_back(l.freespeed_time());
  times_.resize(network.link_count() * bins_);
  for (std::size_t l = 0; l < network.link_count(); ++l) {
    std::fill_n(times_.begin() + static_cast<std::ptrdiff_t>(l * bins_), bins_, freespeed_[l]);
  }
}

TravelTimeField TravelTimeField::from_traversals(const Network& network,
                                                 const std::vector<Traversal>& traversals,
                                                 double bin_size, double horizon) {
  TravelTimeField f(network, bin_size, horizon);
  std::vector<double> sum(f.times_.size(), 0.0);
  std::vector<std::uint32_t> count(f.times_.size(), 0);
  for (const Traversal& t : traversals) {
    const std::size_t idx = static_cast<std::size_t>(t.link) * f.bins_ + f.bin_of(t.enter);
    sum[idx] += t.leave - t.enter;
    ++count[idx];
  }
  for (std::size_t i = 0; i < f.times_.size(); ++i) {
    if (count[i] == 0) continue;
    const double fs = f.freespeed_[i / f.bins_];
    f.times_[i] = std::max(fs, sum[i] / count[i]);
  }
  return f;
}

}  // namespace vertiopt
