// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <json.hpp>
#include <ostream>

#include "chipfhe/chipletsim.hpp"

namespace chipfhe::sim {

using nlohmann::json;

namespace {

json census_json(const PhaseCensus& c) {
  return {{"intt", c.intt}, {"ntt", c.ntt}, {"mas", c.mas}, {"bconv", c.bconv}, {"aut", c.aut}};
}

const char* macro_name(MacroKind k) {
  switch (k) {
    case MacroKind::HADD: return "HADD";
    case MacroKind::HMULT: return "HMULT";
    case MacroKind::KEYSWITCH: return "KEYSWITCH";
    case MacroKind::ROTATE: return "ROTATE";
    case MacroKind::RESCALE: return "RESCALE";
    case MacroKind::MODDOWN: return "MODDOWN";
    case MacroKind::MODDOWN_RESCALE: return "MODDOWN_RESCALE";
  }
  return "?";
}

}  // namespace

std::string report_to_json(const CycleReport& r) {
  json j;
  j["schema"] = 1;
  j["total_cycles"] = r.total_cycles;
  j["wall_ms"] = r.wall_ms;
  j["f_ghz"] = r.f_ghz;
  j["ntt_utilization"] = r.ntt_utilization;
  j["comm_overhead"] = r.comm_overhead;
  j["polynomials_transferred"] = r.polynomials_transferred;
  j["link_transfers"] = r.link_transfers;
  j["link_bytes"] = r.link_bytes;
  j["stall_c2c_modup"] = r.stall_c2c_modup;
  j["census_ntt_equivalent"] = r.census_ntt_equivalent.str();
  json chiplets = json::array();
  for (std::size_t c = 0; c < r.chiplets.size(); ++c) {
    const auto& s = r.chiplets[c];
    chiplets.push_back({{"id", c},
                        {"busy", s.busy},
                        {"idle", s.idle},
                        {"stall", s.stall},
                        {"stall_c2c", s.stall_c2c},
                        {"stall_hbm", s.stall_hbm},
                        {"pu_busy", s.pu_busy},
                        {"transforms", s.transforms},
                        {"ntt_utilization", s.ntt_utilization}});
  }
  j["chiplets"] = chiplets;
  json links = json::array();
  for (const auto& l : r.links)
    links.push_back({{"from", l.from}, {"to", l.to}, {"bytes", l.bytes}, {"transfers", l.transfers},
                     {"busy", l.busy}, {"occupancy", l.occupancy}});
  j["links"] = links;
  json phases;
  for (Phase p : {Phase::modup, Phase::keymul, Phase::moddown, Phase::rescale, Phase::mult, Phase::add, Phase::rotate})
    phases[phase_name(p)] = census_json(r.phase(p));
  j["census"] = {{"phases", phases}, {"total", census_json(r.total())}};
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"macro", s.macro}, {"op", macro_name(s.kind)}, {"l", s.level}, {"limbs_per_chiplet", s.limbs_per_chiplet}});
  j["steps"] = steps;
  j["warnings"] = r.warnings;
  return j.dump(2);
}

void write_timeline_csv(std::ostream& os, const Dag& dag, const std::vector<Timing>& t) {
  os << "chiplet,start,end,kind,limb,phase\n";
  for (std::size_t i = 0; i < dag.ops.size(); ++i) {
    const auto& op = dag.ops[i];
    if (op.kind == OpKind::SYNC || op.kind == OpKind::RECV) continue;
    if (op.duration == 0) continue;
    os << op.chiplet << ',' << t[i].start << ',' << t[i].end << ',' << kind_name(op.kind) << ',' << op.limb << ','
       << phase_name(op.phase) << '\n';
  }
}

}  // namespace chipfhe::sim
