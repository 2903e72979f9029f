// Copyright 2026 The AeroEmit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aeroemit/aggregation.h"

#include <algorithm>
#include <map>

#include "aeroemit/csv.h"
#include "aeroemit/exact_sum.h"

namespace aeroemit::aggregation {
namespace {

std::string mass(double kg) { return csv::format_fixed(kg, 2); }
std::string ratio(double r) { return csv::format_fixed(r, 6); }
std::string ratio(const std::optional<double>& r) {
  return r ? ratio(*r) : std::string();
}

std::optional<double> safe_ratio(double numerator, double denominator) {
  if (!(denominator > 0.0)) return std::nullopt;
  return numerator / denominator;
}

double seat_miles(const FlightOutcome& f) {
  return static_cast<double>(f.resolved.seat_count) * f.resolved.flight.distance_mi;
}

}  // namespace

std::vector<AirlineSummary> aggregate_airlines(std::span<const FlightOutcome> results) {
  struct Acc {
    std::size_t total = 0;
    std::size_t computed = 0;
    long long seats = 0;
    ExactGasSum lto;
    ExactGasSum ccd;
    ExactSum co2;
    ExactSum co2e;
    ExactSum seat_miles;
  };
  std::map<std::string, Acc> by_carrier;
  for (const auto& f : results) {
    Acc& acc = by_carrier[f.resolved.flight.carrier_code];
    ++acc.total;
    if (!f.emissions) continue;
    const auto& e = *f.emissions;
    ++acc.computed;
    acc.seats += f.resolved.seat_count;
    acc.lto.add(e.lto);
    acc.ccd.add(e.ccd);
    acc.co2.add(e.lto.co2());
    acc.co2.add(e.ccd.co2());
    acc.co2e.add(e.total_co2e_kg);
    acc.seat_miles.add(seat_miles(f));
  }
  std::vector<AirlineSummary> out;
  out.reserve(by_carrier.size());
  for (const auto& [code, acc] : by_carrier) {
    AirlineSummary s;
    s.carrier_code = code;
    s.total_flights = acc.total;
    s.emission_flights = acc.computed;
    s.total_seats = acc.seats;
    s.lto_kg = acc.lto.value();
    s.ccd_kg = acc.ccd.value();
    s.total_co2_kg = acc.co2.value();
    s.total_co2e_kg = acc.co2e.value();
    s.seat_miles = acc.seat_miles.value();
    if (acc.computed > 0) {
      s.co2_per_seat_mile = safe_ratio(s.total_co2_kg, s.seat_miles);
      s.co2e_per_seat_mile = safe_ratio(s.total_co2e_kg, s.seat_miles);
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.total_flights > b.total_flights;
  });
  return out;
}

std::vector<AirportLtoSummary> aggregate_airports(std::span<const FlightOutcome> results,
                                                  const emissions::Co2eFactors& factors) {
  struct Acc {
    std::size_t departures = 0;
    std::size_t arrivals = 0;
    ExactGasSum lto;
  };
  std::map<std::string, Acc> by_airport;
  for (const auto& f : results) {
    if (!f.emissions) continue;
    Acc& origin = by_airport[f.resolved.flight.origin];
    ++origin.departures;
    origin.lto.add(f.emissions->lto_origin_share);
    Acc& dest = by_airport[f.resolved.flight.destination];
    ++dest.arrivals;
    dest.lto.add(f.emissions->lto_destination_share);
  }
  std::vector<AirportLtoSummary> out;
  out.reserve(by_airport.size());
  for (const auto& [code, acc] : by_airport) {
    AirportLtoSummary s;
    s.airport = code;
    s.departures = acc.departures;
    s.arrivals = acc.arrivals;
    s.lto_kg = acc.lto.value();
    s.lto_co2e_kg = emissions::co2e(s.lto_kg, factors);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.lto_co2e_kg > b.lto_co2e_kg;
  });
  return out;
}

std::pair<GasBreakdown, GasBreakdown> gas_breakdowns(
    std::span<const FlightOutcome> results, const emissions::Co2eFactors& factors) {
  ExactGasSum lto;
  ExactGasSum ccd;
  for (const auto& f : results) {
    if (!f.emissions) continue;
    lto.add(f.emissions->lto);
    ccd.add(f.emissions->ccd);
  }
  auto make = [&](Cycle cycle, const ExactGasSum& sum) {
    GasBreakdown b;
    b.cycle = cycle;
    b.raw_kg = sum.value();
    for (Gas gas : kAllGases) b.co2e_kg[gas] = b.raw_kg[gas] * factors[gas];
    return b;
  };
  return {make(Cycle::kLto, lto), make(Cycle::kCcd, ccd)};
}

std::optional<double> unep_baseline(double distance_mi,
                                    const std::optional<UnepConfig>& config) {
  if (!config) return std::nullopt;
  return distance_mi < config->cutoff_mi ? config->short_haul_co2_per_seat_mile
                                         : config->long_haul_co2_per_seat_mile;
}

ScatterDatasets scatter_datasets(std::span<const FlightOutcome> results,
                                 const std::optional<UnepConfig>& unep) {
  ScatterDatasets out;
  for (const auto& f : results) {
    if (!f.emissions) continue;
    ScatterPoint p;
    p.distance_mi = f.resolved.flight.distance_mi;
    p.canonical_type = f.resolved.canonical_type;
    p.engine_uid = f.resolved.engine_uid;
    p.carrier_code = f.resolved.flight.carrier_code;
    p.value = f.emissions->total_co2e_kg;
    out.co2e_vs_distance.push_back(p);
    p.value = f.emissions->per_seat_mile_co2_kg;
    p.baseline = unep_baseline(p.distance_mi, unep);
    out.seat_mile_vs_distance.push_back(std::move(p));
  }
  return out;
}

std::vector<GroupSummary> aggregate_groups(std::span<const FlightOutcome> results,
                                           GroupKey key) {
  struct Acc {
    std::size_t flights = 0;
    ExactGasSum lto;
    ExactGasSum ccd;
    ExactSum co2;
    ExactSum co2e;
    ExactSum seat_miles;
  };
  std::map<std::string, Acc> groups;
  for (const auto& f : results) {
    if (!f.emissions) continue;
    std::string k;
    switch (key) {
      case GroupKey::kRoute:
        k = f.resolved.flight.origin + "-" + f.resolved.flight.destination;
        break;
      case GroupKey::kAirframe: k = f.resolved.canonical_type; break;
      case GroupKey::kEngine: k = f.resolved.engine_uid; break;
    }
    Acc& acc = groups[k];
    const auto& e = *f.emissions;
    ++acc.flights;
    acc.lto.add(e.lto);
    acc.ccd.add(e.ccd);
    acc.co2.add(e.lto.co2());
    acc.co2.add(e.ccd.co2());
    acc.co2e.add(e.total_co2e_kg);
    acc.seat_miles.add(seat_miles(f));
  }
  std::vector<GroupSummary> out;
  out.reserve(groups.size());
  for (const auto& [k, acc] : groups) {
    GroupSummary s;
    s.key = k;
    s.flights = acc.flights;
    s.lto_kg = acc.lto.value();
    s.ccd_kg = acc.ccd.value();
    s.total_co2e_kg = acc.co2e.value();
    s.co2_per_seat_mile = safe_ratio(acc.co2.value(), acc.seat_miles.value());
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.total_co2e_kg > b.total_co2e_kg;
  });
  return out;
}

void write_airline_summary(std::ostream& out, std::span<const AirlineSummary> rows) {
  csv::write_row(out, {"carrier", "total_flights", "emission_flights", "total_seats",
                       "total_co2_kg", "co2_per_seat_mile", "total_co2e_kg",
                       "co2e_per_seat_mile"});
  for (const auto& r : rows) {
    csv::write_row(out, std::vector<std::string>{
                            r.carrier_code, std::to_string(r.total_flights),
                            std::to_string(r.emission_flights),
                            std::to_string(r.total_seats), mass(r.total_co2_kg),
                            ratio(r.co2_per_seat_mile), mass(r.total_co2e_kg),
                            ratio(r.co2e_per_seat_mile)});
  }
}

void write_airport_lto(std::ostream& out, std::span<const AirportLtoSummary> rows) {
  csv::write_row(out, {"airport", "departures", "arrivals", "lto_hc_kg", "lto_co2_kg",
                       "lto_co_kg", "lto_nox_kg", "lto_co2e_kg"});
  for (const auto& r : rows) {
    csv::write_row(out, std::vector<std::string>{
                            r.airport, std::to_string(r.departures),
                            std::to_string(r.arrivals), mass(r.lto_kg.hc()),
                            mass(r.lto_kg.co2()), mass(r.lto_kg.co()),
                            mass(r.lto_kg.nox()), mass(r.lto_co2e_kg)});
  }
}

void write_gas_breakdown(std::ostream& out, const GasBreakdown& lto,
                         const GasBreakdown& ccd) {
  csv::write_row(out, {"cycle", "gas", "raw_kg", "co2e_kg"});
  for (const GasBreakdown* b : {&lto, &ccd}) {
    const std::string_view cycle = b->cycle == Cycle::kLto ? "LTO" : "CCD";
    for (Gas gas : kAllGases) {
      csv::write_row(out, {cycle, gas_name(gas), mass(b->raw_kg[gas]),
                           mass(b->co2e_kg[gas])});
    }
  }
}

void write_scatter_co2e(std::ostream& out, std::span<const ScatterPoint> rows) {
  csv::write_row(out, {"distance_mi", "co2e_kg", "canonical_type", "engine_uid",
                       "carrier"});
  for (const auto& p : rows) {
    csv::write_row(out, {csv::format_exact(p.distance_mi), mass(p.value),
                         p.canonical_type, p.engine_uid, p.carrier_code});
  }
}

void write_scatter_seat_mile(std::ostream& out, std::span<const ScatterPoint> rows,
                             bool with_baseline) {
  std::vector<std::string> header = {"distance_mi", "co2_per_seat_mile",
                                     "canonical_type", "engine_uid", "carrier"};
  if (with_baseline) header.emplace_back("unep_co2_per_seat_mile");
  csv::write_row(out, header);
  for (const auto& p : rows) {
    std::vector<std::string> fields = {csv::format_exact(p.distance_mi), ratio(p.value),
                                       p.canonical_type, p.engine_uid, p.carrier_code};
    if (with_baseline) fields.push_back(ratio(p.baseline));
    csv::write_row(out, fields);
  }
}

void write_group_summary(std::ostream& out, std::string_view key_column,
                         std::span<const GroupSummary> rows) {
  std::vector<std::string> header = {std::string(key_column), "flights"};
  for (std::string_view cycle : {"lto", "ccd"}) {
    for (Gas gas : kAllGases) {
      header.push_back(std::string(cycle) + "_" + std::string(gas_column(gas)) + "_kg");
    }
  }
  header.insert(header.end(), {"total_co2e_kg", "co2_per_seat_mile"});
  csv::write_row(out, header);
  for (const auto& r : rows) {
    std::vector<std::string> fields = {r.key, std::to_string(r.flights)};
    for (Gas gas : kAllGases) fields.push_back(mass(r.lto_kg[gas]));
    for (Gas gas : kAllGases) fields.push_back(mass(r.ccd_kg[gas]));
    fields.push_back(mass(r.total_co2e_kg));
    fields.push_back(ratio(r.co2_per_seat_mile));
    csv::write_row(out, fields);
  }
}

}  // namespace aeroemit::aggregation
