#include <doctest.h>

#include <cmath>

#include "qdcd/gates.hpp"

using namespace qdcd;
using namespace std::complex_literals;

namespace {

bool is_unitary(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() < 1e-10;
}

}  // namespace

TEST_SUITE("gates") {

TEST_CASE("rotation gates are unitary across dimensions and angles") {
  for (int d : {2, 3, 4, 5})
    for (double theta : {0.1, 1.3, -2.0})
      CHECK(is_unitary(rotation_gate(d, 0, d - 1, theta, 0.4).matrix));
}

TEST_CASE("zero-angle rotation is the identity") {
  const Unitary u = rotation_gate(3, 0, 1, 0.0, 1.1);
  CHECK((u.matrix - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("full 2 pi rotation of a qubit flips the spinor sign") {
  const Unitary u = rotation_gate(2, 0, 1, 2 * M_PI, 0.0);
  CHECK((u.matrix + Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("rotations about one axis compose additively") {
  const Unitary a = rotation_gate(3, 0, 2, 0.8, 0.3);
  const Unitary b = rotation_gate(3, 0, 2, 0.5, 0.3);
  const Unitary c = rotation_gate(3, 0, 2, 1.3, 0.3);
  CHECK((a.matrix * b.matrix - c.matrix).norm() < 1e-12);
}

TEST_CASE("qubit rotation reproduces the closed-form half-angle matrix") {
  const double theta = 1.1, phi = 0.6;
  const Unitary u = rotation_gate(2, 0, 1, theta, phi);
  // exp(-i theta/2 sigma_phi) = cos(theta/2) I - i sin(theta/2) sigma_phi.
  Matrix sigma(2, 2);
  sigma << 0.0, std::exp(-1i * phi), std::exp(1i * phi), 0.0;
  const Matrix expect = std::cos(theta / 2) * Matrix::Identity(2, 2) -
                        1i * std::sin(theta / 2) * sigma;
  CHECK((u.matrix - expect).norm() < 1e-13);
}

TEST_CASE("MS gate on two qubits makes the expected Bell-type state") {
  // Oracle 1: dense exponentiation of the squared collective operator,
  // assembled here from scratch.
  Matrix sigma(2, 2);
  sigma << 0.0, 1.0, 1.0, 0.0;  // phi = 0
  const Matrix id = Matrix::Identity(2, 2);
  Matrix collective = Matrix::Zero(4, 4);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j)
      for (long k = 0; k < 2; ++k)
        for (long l = 0; l < 2; ++l) {
          collective(i * 2 + k, j * 2 + l) =
              sigma(i, j) * id(k, l) + id(i, j) * sigma(k, l);
        }
  const Matrix gen = collective * collective;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gen);
  const double theta = M_PI / 2;
  const CVector phases =
      (-1i * (theta / 4) * es.eigenvalues().cast<Complex>().array()).exp();
  const Matrix oracle =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  const Unitary ms = ms_gate(2, 0, 1, theta, 0.0);
  CHECK((ms.matrix - oracle).norm() < 1e-12);

  // Oracle 2: closed form on |00>.
  CVector in = CVector::Zero(4);
  in(0) = 1.0;
  const CVector out = ms.matrix * in;
  CVector expect = CVector::Zero(4);
  expect(0) = std::exp(-1i * M_PI / 4.0) / std::sqrt(2.0);
  expect(3) = std::exp(-1i * M_PI / 4.0) * (-1i) / std::sqrt(2.0);
  CHECK((out - expect).norm() < 1e-12);
}

TEST_CASE("MS gate is unitary for qudits") {
  for (int d : {2, 3, 4})
    CHECK(is_unitary(ms_gate(d, 0, 1, 0.9, 0.2).matrix));
}

TEST_CASE("native gate dispatcher covers both kinds") {
  const Unitary r = native_gate(3, 0, 1, 0.7, 0.1, GateKind::Rotation);
  CHECK((r.matrix - rotation_gate(3, 0, 1, 0.7, 0.1).matrix).norm() == 0.0);
  const Unitary m = native_gate(2, 0, 1, 0.7, 0.1, GateKind::MolmerSorensen);
  CHECK((m.matrix - ms_gate(2, 0, 1, 0.7, 0.1).matrix).norm() == 0.0);
}

}  // TEST_SUITE
