#include "revdft/report.hpp"

#include <stdexcept>

namespace revdft {

using nlohmann::json;

json to_json(const CostReport &report) {
  return json{
      {"wires", report.wires},
      {"gate_cost", report.gate_cost},
      {"quantum_cost", report.quantum_cost},
      {"constant_inputs", report.constant_inputs},
      {"garbage_outputs", report.garbage_outputs},
  };
}

json to_json(const MetricDelta &delta) {
  json j{
      {"baseline", delta.baseline},
      {"transformed", delta.transformed},
      {"absolute", delta.absolute},
  };
  if (delta.percentage) {
    j["percentage"] = *delta.percentage;
  } else {
    j["percentage"] = "n/a";
  }
  return j;
}

json to_json(const CostDelta &delta) {
  return json{
      {"wires", to_json(delta.wires)},
      {"gate_cost", to_json(delta.gate_cost)},
      {"quantum_cost", to_json(delta.quantum_cost)},
      {"constant_inputs", to_json(delta.constant_inputs)},
      {"garbage_outputs", to_json(delta.garbage_outputs)},
  };
}

namespace {

const char *polarity_name(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

Polarity parse_polarity(const std::string &s) {
  if (s == "positive") return Polarity::positive;
  if (s == "negative") return Polarity::negative;
  throw std::invalid_argument("unknown polarity '" + s + "'");
}

}  // namespace

json to_json(const Fault &fault, const Circuit &circuit) {
  json j{{"kind", kind_name(kind_of(fault))}};
  auto name = [&](LineId l) { return circuit.line(l).name; };
  if (const auto *f = std::get_if<BitFlip>(&fault)) {
    j["line"] = name(f->line);
    j["segment"] = f->segment;
  } else if (const auto *s = std::get_if<StuckAt>(&fault)) {
    j["line"] = name(s->line);
    j["segment"] = s->segment;
    j["value"] = s->value ? 1 : 0;
  } else if (const auto *m = std::get_if<MissingGate>(&fault)) {
    j["level"] = m->level;
  } else if (const auto *a = std::get_if<CrossPointAppearance>(&fault)) {
    j["level"] = a->level;
    j["line"] = name(a->line);
    j["polarity"] = polarity_name(a->polarity);
  } else if (const auto *d = std::get_if<CrossPointDisappearance>(&fault)) {
    j["level"] = d->level;
    j["line"] = name(d->line);
  } else if (const auto *b = std::get_if<Bridging>(&fault)) {
    j["lines"] = json::array({name(b->first), name(b->second)});
    j["segment"] = b->segment;
    j["mode"] = b->mode == BridgeMode::wired_and ? "wired-and" : "wired-or";
  }
  return j;
}

Fault fault_from_json(const json &j, const Circuit &circuit) {
  const auto kind = parse_fault_kind(j.at("kind").get<std::string>());
  auto line = [&](const json &v) { return circuit.line_id(v.get<std::string>()); };
  switch (kind) {
    case FaultKind::bit_flip:
      return BitFlip{line(j.at("line")), j.at("segment").get<std::size_t>()};
    case FaultKind::stuck_at:
      return StuckAt{line(j.at("line")), j.at("segment").get<std::size_t>(),
                     j.at("value").get<int>() != 0};
    case FaultKind::missing_gate:
      return MissingGate{j.at("level").get<std::size_t>()};
    case FaultKind::cross_point_appearance:
      return CrossPointAppearance{j.at("level").get<std::size_t>(), line(j.at("line")),
                                  parse_polarity(j.at("polarity").get<std::string>())};
    case FaultKind::cross_point_disappearance:
      return CrossPointDisappearance{j.at("level").get<std::size_t>(), line(j.at("line"))};
    case FaultKind::bridging: {
      const auto &lines = j.at("lines");
      const auto mode = j.at("mode").get<std::string>();
      if (mode != "wired-and" && mode != "wired-or") {
        throw std::invalid_argument("unknown bridging mode '" + mode + "'");
      }
      return Bridging{line(lines.at(0)), line(lines.at(1)), j.at("segment").get<std::size_t>(),
                      mode == "wired-and" ? BridgeMode::wired_and : BridgeMode::wired_or};
    }
  }
  throw std::invalid_argument("unknown fault kind");
}

json to_json(const CoverageReport &report, const Circuit &circuit) {
  json undetected = json::array();
  for (const auto &set : report.undetected) {
    json faults = json::array();
    for (const auto &f : set) {
      faults.push_back(to_json(f, circuit));
    }
    undetected.push_back(std::move(faults));
  }
  json j{
      {"total", report.total},
      {"detected", report.detected},
      {"coverage", report.coverage},
      {"undetected", std::move(undetected)},
  };
  if (report.empty_universe) {
    j["note"] = "empty fault universe; coverage reported as 1.0";
  }
  return j;
}

}  // namespace revdft
