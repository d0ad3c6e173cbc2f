#include "doctest.h"

#include "fklab/svg.hpp"

using namespace fklab;

TEST_CASE("render produces a standalone svg") {
  PlotSpec p;
  p.title = "t & <x>";
  p.log_x = p.log_y = true;
  p.series.push_back({"data", {1, 10, 100}, {2, 20, 200}, {1, 10, 100}, {3, 30, 300}, false});
  p.series.push_back({"fit", {1, 100}, {2, 200}, {}, {}, true});
  const std::string s = render_svg(p);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("polyline") != std::string::npos);
  CHECK(s.find("&amp;") != std::string::npos);
  CHECK(s.find("<x>") == std::string::npos);
}

TEST_CASE("empty and degenerate plots do not throw") {
  PlotSpec p;
  CHECK_NOTHROW(render_svg(p));
  p.series.push_back({"one", {1}, {1}, {}, {}, false});
  CHECK_NOTHROW(render_svg(p));
}
