#include <sstream>

#include "cws/workspace.hpp"
#include "doctest.h"

using namespace cws;

TEST_CASE("budget accepts up to its limit") {
  WorkspaceBudget b(100);
  b.alloc(40);
  b.alloc(60);
  CHECK(b.peak() == 100);
  CHECK(b.current() == 100);
  b.release(60);
  CHECK(b.current() == 40);
  CHECK(b.peak() == 100);
}

TEST_CASE("budget rejects an oversized request") {
  WorkspaceBudget b(100);
  try {
    b.alloc(101);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.requested() == 101);
    CHECK(e.limit() == 100);
    CHECK(e.kind() == ErrorKind::budget_exceeded);
  }
}

TEST_CASE("metered vector charges words") {
  WorkspaceBudget b(1000);
  {
    mvector<Point> v{Metered<Point>(&b)};
    v.reserve(10);
    CHECK(b.current() == 20);  // a point is two words
    WorkspaceGrant g(&b, 3);
    CHECK(b.current() == 23);
  }
  CHECK(b.current() == 0);
  CHECK(b.peak() == 23);
  mvector<Point> big{Metered<Point>(&b)};
  CHECK_THROWS_AS(big.resize(501), BudgetExceeded);
}

TEST_CASE("read-only array counts every access") {
  ReadOnlyArray a({{1, 2}, {3, 4}});
  CHECK(a.reads() == 0);
  CHECK(a[1] == Point{3, 4});
  (void)a[0];
  CHECK(a.reads() == 2);
  const auto h = a.content_hash();
  (void)a.unmetered()[0];
  CHECK(a.reads() == 2);
  CHECK(a.content_hash() == h);
}

TEST_CASE("sink writes normalized lines") {
  std::ostringstream os;
  OutputSink sink(&os, true);
  sink.edge(5, 2);
  sink.hull_edge(3, 1);
  sink.vertex({2, 0, 1}, circumcenter({0, 0}, {2, 0}, {1, 5}));
  CHECK(os.str() == "E 2 5\nH 3 1\nV 0 1 2 1/1 12/5\n");
  CHECK(sink.emitted() == 3);
  CHECK(sink.edges().size() == 1);
}

TEST_CASE("audit report csv") {
  AuditReport r{4096, 64, 1000, 123456, 12285, 1.5};
  CHECK(AuditReport::csv_header() == "n,s,peak_words,input_reads,emits,wall_ms");
  CHECK(r.csv_row() == "4096,64,1000,123456,12285,1.500");
  AuditReport r2 = r;
  r2.wall_ms = 99;
  CHECK(r.same_work(r2));
}

TEST_CASE("point parsing") {
  std::istringstream in("# header\n0 0\n\n-5 7\n67108864 -67108864\n");
  const auto pts = parse_points(in);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1] == Point{-5, 7});

  std::istringstream bad("0 0\n1 x\n");
  try {
    parse_points(bad);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream far("67108865 0\n");
  CHECK_THROWS_AS(parse_points(far), ParseError);
  std::istringstream two_spaces("1  2\n");
  CHECK_THROWS_AS(parse_points(two_spaces), ParseError);
}

TEST_CASE("duplicates are rejected with both indices") {
  try {
    reject_duplicates({{0, 0}, {1, 1}, {0, 0}});
    FAIL("expected degenerate input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_input);
    CHECK(std::string(e.what()).find("0 and 2") != std::string::npos);
  }
  CHECK_NOTHROW(reject_duplicates({{0, 0}, {0, 1}}));
}
