#include "ebrmap/pwe_table.hpp"

#include <cmath>
#include <stdexcept>

namespace ebrmap {

void PweTable::validate() const {
  if (intervals.empty()) throw std::invalid_argument("PweTable: no intervals");
  if (intervals.front().first != 0.0) {
    throw std::invalid_argument("PweTable: first interval must start at 0");
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (!(intervals[i].second > intervals[i].first)) {
      throw std::invalid_argument("PweTable: intervals must be strictly increasing");
    }
    if (i > 0 && std::fabs(intervals[i].first - intervals[i - 1].second) > 1e-9) {
      throw std::invalid_argument("PweTable: intervals must be contiguous");
    }
  }
  for (const auto& s : studies) {
    if (s.cells.size() != intervals.size()) {
      throw std::invalid_argument("PweTable: study '" + s.study_id +
                                  "' does not cover every interval");
    }
    for (const auto& c : s.cells) {
      if (c.events < 0 || c.exposure < 0.0) {
        throw std::invalid_argument("PweTable: negative cell in study '" + s.study_id + "'");
      }
    }
  }
}

HistoricalDataset collapse_intervals(const PweTable& table, std::size_t from_idx,
                                     std::size_t to_idx) {
  table.validate();
  if (from_idx < 1 || from_idx > to_idx || to_idx > table.interval_count()) {
    throw std::invalid_argument("collapse_intervals: bad interval range");
  }
  HistoricalDataset out;
  out.reserve(table.studies.size());
  for (const auto& s : table.studies) {
    long events = 0;
    double exposure = 0.0;
    for (std::size_t i = from_idx - 1; i < to_idx; ++i) {
      events += s.cells[i].events;
      exposure += s.cells[i].exposure;
    }
    out.push_back({s.study_id, TteSummary{events, exposure}});
  }
  return out;
}

PweTable embedded_appendix_data() {
  PweTable t;
  t.intervals = {{0.00, 0.25}, {0.25, 0.50}, {0.50, 0.75}, {0.75, 1.00},
                 {1.00, 1.25}, {1.25, 1.50}, {1.50, 1.75}, {1.75, 2.08},
                 {2.08, 2.50}, {2.50, 2.92}, {2.92, 3.33}, {3.33, 4.00}};
  const auto add = [&t](std::string id, std::vector<PweCell> cells) {
    t.studies.push_back({std::move(id), std::move(cells)});
  };
  add("Historical 1", {{1, 9.4}, {3, 8.8}, {3, 7.9}, {4, 7.0}, {3, 6.1}, {0, 5.8},
                       {0, 5.8}, {2, 7.3}, {0, 8.8}, {6, 7.6}, {0, 6.2}, {0, 10.0}});
  add("Historical 2", {{9, 21.1}, {1, 19.9}, {0, 19.8}, {10, 18.5}, {6, 16.5}, {6, 15.0},
                       {5, 13.6}, {9, 15.7}, {9, 16.2}, {3, 13.6}, {0, 12.5}, {0, 20.1}});
  add("Historical 3", {{1, 21.9}, {3, 21.4}, {5, 20.4}, {7, 18.9}, {9, 16.9}, {4, 15.2},
                       {5, 14.1}, {10, 16.2}, {0, 18.5}, {0, 18.3}, {3, 17.0}, {7, 24.5}});
  add("Historical 4", {{1, 5.6}, {2, 5.2}, {2, 4.8}, {4, 4.0}, {3, 3.1}, {1, 2.6},
                       {3, 2.1}, {0, 2.3}, {0, 2.9}, {0, 2.9}, {0, 2.9}, {0, 4.7}});
  add("Historical 5", {{5, 6.4}, {3, 5.4}, {6, 4.2}, {2, 3.2}, {3, 2.6}, {3, 1.9},
                       {0, 1.5}, {2, 1.7}, {1, 1.5}, {1, 1.0}, {1, 0.6}, {0, 0.7}});
  add("Historical 6", {{0, 17.8}, {6, 17.0}, {3, 15.9}, {12, 14.0}, {8, 11.5}, {2, 10.2},
                       {3, 9.6}, {2, 11.9}, {11, 12.4}, {1, 9.9}, {0, 9.4}, {10, 12.1}});
  add("Historical 7", {{2, 8.0}, {2, 7.5}, {5, 6.6}, {3, 5.6}, {3, 4.9}, {3, 4.1},
                       {2, 3.5}, {3, 3.8}, {3, 3.6}, {0, 2.9}, {0, 2.9}, {0, 4.7}});
  add("Historical 8", {{0, 9.2}, {1, 9.1}, {3, 8.6}, {4, 7.8}, {1, 7.1}, {1, 6.9},
                       {4, 6.2}, {1, 7.4}, {6, 8.0}, {0, 6.7}, {0, 6.6}, {0, 10.7}});
  add("Historical 9", {{2, 5.2}, {0, 5.0}, {3, 4.6}, {1, 4.1}, {4, 3.5}, {0, 3.0},
                       {1, 2.9}, {1, 3.5}, {0, 4.2}, {0, 4.2}, {0, 4.1}, {0, 6.7}});
  add("Current", {{1, 23.4}, {5, 22.6}, {17, 19.9}, {0, 17.8}, {2, 17.5}, {7, 16.4},
                  {8, 14.5}, {4, 17.2}, {0, 21.0}, {6, 19.7}, {2, 17.4}, {0, 27.5}});
  t.validate();
  return t;
}

}  // namespace ebrmap
