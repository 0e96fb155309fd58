#include "doctest.h"

#include <sstream>

#include "cnotsynth/qc_io.hpp"

using namespace cnot;

TEST_CASE("read_qc parses the subset") {
  std::istringstream in(
      ".v a b c\n"
      ".i a b\n"
      ".o a b c\n"
      "BEGIN\n"
      "tof a b\n"
      "cnot b c\n"
      "T a\n"
      "T* c\n"
      "tof b\n"
      "x a\n"
      "H c\n"
      "END\n");
  QcFile qc = read_qc(in);
  CHECK(qc.wire_names == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(qc.circuit.gates.size() == 7);
  CHECK(qc.circuit.gates[0] == Gate::cnot_gate(0, 1));
  CHECK(qc.circuit.gates[1] == Gate::cnot_gate(1, 2));
  CHECK(qc.circuit.gates[2] == Gate::other("T", {0}));
  CHECK(qc.circuit.gates[3] == Gate::other("T*", {2}));
  CHECK(qc.circuit.gates[4] == Gate::other("x", {1}));
  CHECK(qc.circuit.gates[5] == Gate::other("x", {0}));
  CHECK(qc.circuit.gates[6] == Gate::other("H", {2}));
}

TEST_CASE("read_qc reports parse errors with line numbers") {
  std::istringstream unknown(".v a b\nBEGIN\nfredkin a b\nEND\n");
  try {
    read_qc(unknown);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line_number == 3);
  }

  std::istringstream undeclared(".v a\nBEGIN\ntof a q\nEND\n");
  CHECK_THROWS_AS(read_qc(undeclared), parse_error);

  std::istringstream no_end(".v a b\nBEGIN\ntof a b\n");
  CHECK_THROWS_AS(read_qc(no_end), parse_error);

  std::istringstream bad_io(".v a\n.i a b\nBEGIN\nEND\n");
  CHECK_THROWS_AS(read_qc(bad_io), parse_error);
}

TEST_CASE("write_qc then read_qc round trips") {
  QcFile qc;
  qc.wire_names = {"q0", "q1", "q2"};
  qc.circuit = Circuit(3);
  qc.circuit.add_cnot(0, 2);
  qc.circuit.gates.push_back(Gate::other("S*", {1}));
  qc.circuit.add_cnot(2, 1);

  std::ostringstream out;
  write_qc(out, qc);
  std::istringstream in(out.str());
  QcFile back = read_qc(in);
  CHECK(back.wire_names == qc.wire_names);
  REQUIRE(back.circuit.gates.size() == qc.circuit.gates.size());
  for (std::size_t i = 0; i < qc.circuit.gates.size(); ++i)
    CHECK(back.circuit.gates[i] == qc.circuit.gates[i]);
}

TEST_CASE("write_qc emits the residual permutation as a comment") {
  QcFile qc;
  qc.wire_names = {"a", "b"};
  qc.circuit = Circuit(2);
  Permutation p(2);
  p.image = {1, 0};
  std::ostringstream out;
  write_qc(out, qc, &p);
  CHECK(out.str().find("# out-perm: 1 0") != std::string::npos);

  // comments are ignored on read
  std::istringstream in(out.str());
  CHECK_NOTHROW(read_qc(in));
}
