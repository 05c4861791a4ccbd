#pragma once

// Sum-factorized evaluation and testing on one tensor cell. Coefficients are
// laid out as c[(ax * n1 + ap) * n1 + am]; point data as g[(qx * nq + qp) * nq + qm].

#include <cassert>

#include "bpdg/dg_field.hpp"

namespace bpdg::kernels {

constexpr int max_points = 16;
constexpr int max_modes = 5;

// out[qx,qp,qm] = sum_a c[ax,ap,am] Tx[qx,ax] Tp[qp,ap] Tm[qm,am]; tables are nq x n1.
inline void trial3(int n1, int nq, const double* c, const double* Tx, const double* Tp, const double* Tm,
                   double* out) {
  assert(n1 <= max_modes && nq <= max_points);
  double A[max_modes * max_modes * max_points];
  double B[max_modes * max_points * max_points];
  for (int ax = 0; ax < n1; ++ax)
    for (int ap = 0; ap < n1; ++ap)
      for (int qm = 0; qm < nq; ++qm) {
        double s = 0.0;
        for (int am = 0; am < n1; ++am) s += c[(ax * n1 + ap) * n1 + am] * Tm[qm * n1 + am];
        A[(ax * n1 + ap) * nq + qm] = s;
      }
  for (int ax = 0; ax < n1; ++ax)
    for (int qp = 0; qp < nq; ++qp)
      for (int qm = 0; qm < nq; ++qm) {
        double s = 0.0;
        for (int ap = 0; ap < n1; ++ap) s += A[(ax * n1 + ap) * nq + qm] * Tp[qp * n1 + ap];
        B[(ax * nq + qp) * nq + qm] = s;
      }
  for (int qx = 0; qx < nq; ++qx)
    for (int qp = 0; qp < nq; ++qp)
      for (int qm = 0; qm < nq; ++qm) {
        double s = 0.0;
        for (int ax = 0; ax < n1; ++ax) s += B[(ax * nq + qp) * nq + qm] * Tx[qx * n1 + ax];
        out[(qx * nq + qp) * nq + qm] = s;
      }
}

// R[ax,ap,am] += sum_q g[q] Tx[qx,ax] Tp[qp,ap] Tm[qm,am]
inline void test3(int n1, int nq, const double* g, const double* Tx, const double* Tp, const double* Tm, double* R) {
  double A[max_points * max_points * max_modes];
  double B[max_points * max_modes * max_modes];
  for (int qx = 0; qx < nq; ++qx)
    for (int qp = 0; qp < nq; ++qp)
      for (int am = 0; am < n1; ++am) {
        double s = 0.0;
        for (int qm = 0; qm < nq; ++qm) s += g[(qx * nq + qp) * nq + qm] * Tm[qm * n1 + am];
        A[(qx * nq + qp) * n1 + am] = s;
      }
  for (int qx = 0; qx < nq; ++qx)
    for (int ap = 0; ap < n1; ++ap)
      for (int am = 0; am < n1; ++am) {
        double s = 0.0;
        for (int qp = 0; qp < nq; ++qp) s += A[(qx * nq + qp) * n1 + am] * Tp[qp * n1 + ap];
        B[(qx * n1 + ap) * n1 + am] = s;
      }
  for (int ax = 0; ax < n1; ++ax)
    for (int ap = 0; ap < n1; ++ap)
      for (int am = 0; am < n1; ++am) {
        double s = 0.0;
        for (int qx = 0; qx < nq; ++qx) s += B[(qx * n1 + ap) * n1 + am] * Tx[qx * n1 + ax];
        R[(ax * n1 + ap) * n1 + am] += s;
      }
}

// Collapse direction `dir` (0 = x, 1 = p, 2 = mu) against endpoint values e[a]:
// out[a1, a2] over the two remaining directions in (x, p, mu) order.
inline void collapse(int n1, int dir, const double* c, const double* e, double* out) {
  for (int a1 = 0; a1 < n1; ++a1)
    for (int a2 = 0; a2 < n1; ++a2) {
      double s = 0.0;
      for (int a = 0; a < n1; ++a) {
        const int idx = dir == 0 ? (a * n1 + a1) * n1 + a2 : dir == 1 ? (a1 * n1 + a) * n1 + a2 : (a1 * n1 + a2) * n1 + a;
        s += c[idx] * e[a];
      }
      out[a1 * n1 + a2] = s;
    }
}

// Face trace of a cell on the nq x nq grid of the remaining directions.
inline void trace(int n1, int nq, int dir, const double* c, const double* e, const double* T, double* out) {
  double C2[max_modes * max_modes];
  collapse(n1, dir, c, e, C2);
  double A[max_modes * max_points];
  for (int a1 = 0; a1 < n1; ++a1)
    for (int q2 = 0; q2 < nq; ++q2) {
      double s = 0.0;
      for (int a2 = 0; a2 < n1; ++a2) s += C2[a1 * n1 + a2] * T[q2 * n1 + a2];
      A[a1 * nq + q2] = s;
    }
  for (int q1 = 0; q1 < nq; ++q1)
    for (int q2 = 0; q2 < nq; ++q2) {
      double s = 0.0;
      for (int a1 = 0; a1 < n1; ++a1) s += A[a1 * nq + q2] * T[q1 * n1 + a1];
      out[q1 * nq + q2] = s;
    }
}

// R[a] += e[a_dir] * sum_{q1,q2} g[q1,q2] T[q1,a1] T[q2,a2]
inline void test_face(int n1, int nq, int dir, const double* g, const double* e, const double* T, double* R) {
  double A[max_points * max_modes];
  for (int q1 = 0; q1 < nq; ++q1)
    for (int a2 = 0; a2 < n1; ++a2) {
      double s = 0.0;
      for (int q2 = 0; q2 < nq; ++q2) s += g[q1 * nq + q2] * T[q2 * n1 + a2];
      A[q1 * n1 + a2] = s;
    }
  for (int a1 = 0; a1 < n1; ++a1)
    for (int a2 = 0; a2 < n1; ++a2) {
      double s = 0.0;
      for (int q1 = 0; q1 < nq; ++q1) s += A[q1 * n1 + a2] * T[q1 * n1 + a1];
      for (int a = 0; a < n1; ++a) {
        const int idx = dir == 0 ? (a * n1 + a1) * n1 + a2 : dir == 1 ? (a1 * n1 + a) * n1 + a2 : (a1 * n1 + a2) * n1 + a;
        R[idx] += e[a] * s;
      }
    }
}

}  // namespace bpdg::kernels
