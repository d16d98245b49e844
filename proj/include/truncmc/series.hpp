#pragma once

#include <string>
#include <vector>

namespace truncmc {

// Per-sweep time series of one measured observable from one chain stream.
struct ObservableSeries {
  std::string name;
  std::vector<double> values;
  int stream_id = 0;
  std::string params_fingerprint;
};

}  // namespace truncmc
