#pragma once

#include <cstdint>
#include <limits>

#include "ctan/ctdg/event.hpp"
#include "ctan/rng.hpp"

namespace ctan::datagen {

/// Periodic bipartite interaction stream: at unit time step t, user
/// u = t mod users meets item (u + floor(t / period)) mod items. The next
/// partner of a user is fully determined by its history, so a model that
/// retains state can predict future links; a short memory cannot.
/// Edge features are one-dimensional uniform noise. Items get node ids
/// offset by the user count. Pass period = 0 for an infinite period
/// (constant partner).
inline ctdg::EventStream gen_periodic_bipartite(std::int64_t users,
                                                std::int64_t items,
                                                std::int64_t period,
                                                std::int64_t events,
                                                std::uint64_t seed) {
  if (users < 2 || items < 2)
    throw ContractError("gen_periodic_bipartite: need at least 2 users and 2 items");
  if (period < 0 || events < 1)
    throw ContractError("gen_periodic_bipartite: bad period or event count");
  Rng rng(seed);
  ctdg::EventStream s;
  s.node_feat_dim = 0;
  s.edge_feat_dim = 1;
  for (std::int64_t t = 0; t < events; ++t) {
    const std::int64_t u = t % users;
    const std::int64_t phase = period == 0 ? 0 : t / period;
    const std::int64_t item = (u + phase) % items;
    ctdg::Event e;
    e.time = static_cast<double>(t);
    e.kind = ctdg::EventKind::EdgeAdd;
    e.src = s.intern(u);
    e.dst = s.intern(users + item);
    e.edge_features = {rng.uniform(-1.0, 1.0)};
    s.events.push_back(std::move(e));
  }
  s.validate();
  return s;
}

/// The deterministic partner rule; tests and the replay oracle both use it.
inline std::int64_t periodic_partner(std::int64_t t, std::int64_t users,
                                     std::int64_t items, std::int64_t period) {
  const std::int64_t u = t % users;
  const std::int64_t phase = period == 0 ? 0 : t / period;
  return (u + phase) % items;
}

}  // namespace ctan::datagen
