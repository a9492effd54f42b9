#pragma once

#include <initializer_list>
#include <vector>

#include "pqep/matrix.hpp"

namespace fixtures {

using pqep::cplx;
using pqep::Mat;

inline Mat rows(int r, int c, std::initializer_list<cplx> data) {
  Mat m(r, c);
  auto it = data.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

constexpr cplx I{0.0, 1.0};

// Real 4x4 T-palindromic system with four real eigenvalues replaced by a quadruple.
struct TPalindromicEep {
  Mat A = rows(4, 4, {.8147, .6324, .9575, .9572, .9058, .0975, .9649, .4854,
                      .1270, .2785, .1576, .8003, .9134, .5469, .9706, .1419});
  Mat Q = rows(4, 4, {1.8435, 1.5715, 1.4709, 1.6150, 1.5715, -.0714, 1.6069, 1.1052,
                      1.4709, 1.6069, 1.4863, 1.0983, 1.6150, 1.1052, 1.0983, .0637});
  std::vector<cplx> from{-4.1054, -0.2436, 1.9390, 0.5157};
  std::vector<cplx> to{{-1, 2}, {-1, -2}, 1.0 / cplx(-1, 2), 1.0 / cplx(-1, -2)};
  Mat A_new = rows(4, 4, {.2835, .3007, .0808, .7761, .2886, .2748, .2803, -.1003,
                          .3205, .3777, .0966, .6529, .6080, -.1364, .4769, .5826});
  Mat Q_new = rows(4, 4, {.7773, .4984, .6229, 1.3387, .4984, .5087, .4176, -.2612,
                          .6229, .4176, .4187, 1.2751, 1.3387, -.2612, 1.2751, .9606});
  double gamma_pair1 = 3.0441;
  double gamma_pair2 = 14.8606;
};

struct TAntiEep {
  Mat A = rows(4, 4, {1.8147, .6324, .9575, .9572, .9058, .0975, .9649, .4854,
                      .1270, .2785, .1576, .8003, .9134, .5469, 1.9706, .1419});
  Mat Q = rows(4, 4, {0, -1.2734, .8305, 3.0438, 1.2734, 0, 1.6864, -2.0615,
                      -.8305, -1.6864, 0, -1.1703, -3.0438, 2.0615, 1.1703, 0});
  std::vector<cplx> from{{2.7401, 4.1215}, {2.7401, -4.1215}, {0.1119, 0.1683}, {0.1119, -0.1683}};
  std::vector<cplx> to{{-1, 2}, {-1, -2}, 1.0 / cplx(-1, 2), 1.0 / cplx(-1, -2)};
  Mat A_new = rows(4, 4, {.8667, .7079, .6565, 3.0845, 1.1951, -.4333, 1.3354, -.4795,
                          -.7730, -.3868, -.1891, 1.2210, 1.8452, .8306, 2.8074, -.5746});
  Mat Q_new = rows(4, 4, {0, -1.8705, 1.3098, 3.5725, 1.8705, 0, 2.7873, -3.2578,
                          -1.3098, -2.7873, 0, -2.0273, -3.5725, 3.2578, 2.0273, 0});
};

// 3x3 T-anti-palindromic system with a modulus-one pair.
struct TAntiUnimodularEep {
  Mat A = rows(3, 3, {.2511, .3517, .5497, .6160, .8308, .9172, .4733, .5853, .2858});
  Mat Q = rows(3, 3, {0, -.1859, .1504, .1859, 0, .7252, -.1504, -.7252, 0});
  std::vector<cplx> from{{-0.5891, 0.8081}, {-0.5891, -0.8081}};
  std::vector<cplx> to{{-0.6, 0.8}, {-0.6, -0.8}};
  std::vector<cplx> spectrum{{-0.5891, 0.8081}, {-0.5891, -0.8081}, -22.3140, -0.0448, 1.0, -1.0};
  std::vector<cplx> retained{-22.3140, -0.0448, 1.0, -1.0};
  Mat A_new = rows(3, 3, {.2502, .3507, .5520, .6156, .8309, .9244, .4746, .5876, .2930});
  Mat Q_new = rows(3, 3, {0, -.1874, .1505, .1874, 0, .7253, -.1505, -.7253, 0});
};

struct HPalindromicEep {
  Mat A = rows(3, 3, {{.4218, .7577}, {.9595, .6555}, {.8491, .0318},
                      {.9157, .7431}, {.6557, .1712}, {.9340, .2769},
                      {.7922, .3922}, {.0357, .7060}, {.6787, .0462}});
  Mat Q = rows(3, 3, {.1943, {1.1406, .2587}, {1.1336, .2649},
                      {1.1406, -.2587}, 1.9004, {.4160, -.4333},
                      {1.1336, -.2649}, {.4160, .4333}, 1.5310});
  std::vector<cplx> from{{1.4953, -3.3887}, {0.1090, -0.2470}};
  std::vector<cplx> to{{-3, 4}, 1.0 / cplx(-3, -4)};
  Mat A_new = rows(3, 3, {{-7.3203, .1876}, {.1303, 2.1294}, {3.2785, 7.0618},
                          {4.1611, -1.0484}, {.5150, -.2911}, {-1.5734, -2.3416},
                          {-1.3545, .0932}, {.2321, 1.0792}, {.5759, 1.8504}});
  Mat Q_new = rows(3, 3, {-15.8294, {4.5402, 3.9245}, {.6462, 5.7786},
                          {4.5402, -3.9245}, -1.2371, {1.2954, -.4690},
                          {.6462, -5.7786}, {1.2954, .4690}, -6.1958});
};

inline std::vector<cplx> t_qiep_spectrum() {
  const cplx z(-1, 2);
  return {z, std::conj(z), 1.0 / z, 1.0 / std::conj(z), -4.0, -0.25, -5.0, -0.2};
}

inline std::vector<cplx> h_qiep_spectrum() {
  std::vector<cplx> out;
  for (cplx z : {cplx(-1, 2), cplx(-3, -5), cplx(-4, 3), cplx(-0.2, 3)}) {
    out.push_back(z);
    out.push_back(1.0 / std::conj(z));
  }
  return out;
}

struct QiepCase {
  Mat Y1, Xi, A, Q;
};

inline QiepCase t_plus_qiep() {
  return {rows(4, 4, {.3724, .9516, .2691, .4177, .1981, .9203, .4228, .9831,
                      .4897, .0527, .5479, .3015, .3395, .7379, .9427, .7011}),
          rows(4, 4, {.3468, .4514, 1.4882, .8189, .4514, .7985, 1.1548, 1.4009,
                      1.4882, 1.1548, .5840, .5988, .8189, 1.4009, .5988, .2124}),
          rows(4, 4, {1.1153, -.5013, .9107, -.7386, -3.4579, 1.3472, -.1855, .5473,
                      -.2287, 2.2627, 1.4561, -2.7362, 2.4139, -2.0314, -1.4212, 1.5321}),
          rows(4, 4, {3.4256, -3.5659, -1.5729, 1.3346, -3.5659, 4.2659, 10.1647, -6.6399,
                      -1.5729, 10.1647, 5.3911, -11.1041, 1.3346, -6.6399, -11.1041, 10.9808})};
}

inline QiepCase t_minus_qiep() {
  return {rows(4, 4, {.6952, .1239, .2703, .4170, .4991, .4904, .2085, .2060,
                      .5358, .8530, .5650, .9479, .4452, .8739, .6403, .0821}),
          rows(4, 4, {0, -.2675, .0911, -.5721, .2675, 0, -.2841, .4427,
                      -.0911, .2841, 0, .0928, .5721, -.4427, -.0928, 0}),
          rows(4, 4, {-12.5296, -.2104, 7.0331, -2.6328, 35.8100, -16.4670, -13.9577, 11.2615,
                      -5.4351, 8.2254, .3911, -2.7134, -9.3232, -6.3783, 6.3367, .0927}),
          rows(4, 4, {0, -33.4119, 14.9409, -7.5068, 33.4119, 0, -23.1963, 42.3113,
                      -14.9409, 23.1963, 0, -10.4606, 7.5068, -42.3113, 10.4606, 0})};
}

inline QiepCase h_plus_qiep() {
  return {rows(4, 4, {{.0738, .4759}, {.0224, .6204}, {.4658, .0273}, {.8976, .5199},
                      {.1205, .3683}, {.0538, .2828}, {.5609, .8762}, {.2886, .0538},
                      {.9816, .6556}, {.1409, .2052}, {.4945, .6101}, {.2690, .8622},
                      {.4968, .9382}, {.8935, .4391}, {.0678, .2036}, {.5942, .4429}}),
          rows(4, 4, {.1050, {.8927, -.1619}, {.9946, -.0184}, {1.3165, -.2834},
                      {.8927, .1619}, 1.8169, {.5874, -.1013}, {1.2373, -.7127},
                      {.9946, .0184}, {.5874, .1013}, 1.7012, {1.1421, .0164},
                      {1.3165, .2834}, {1.2373, .7127}, {1.1421, -.0164}, 1.0347}),
          rows(4, 4, {{1.5633, .7576}, {-1.3785, -.7323}, {-.0108, 1.6630}, {-.2452, -.8216},
                      {-1.3884, -.0225}, {1.1459, 1.2699}, {-.3260, -2.3946}, {.7836, .8379},
                      {1.0209, -1.4616}, {-1.1844, .3935}, {1.6808, 1.1489}, {-1.0802, -.0848},
                      {-1.1175, .8980}, {1.2819, -.8115}, {-1.3784, -.6016}, {.6444, .1055}}),
          rows(4, 4, {9.4521, {-6.0199, 1.9595}, {1.0665, 6.3138}, {-3.1172, -7.4503},
                      {-6.0199, -1.9595}, 6.9420, {-2.1788, -4.8753}, {1.0308, 6.0558},
                      {1.0665, -6.3138}, {-2.1788, 4.8753}, 6.4252, {-5.2896, .9153},
                      {-3.1172, 7.4503}, {1.0308, -6.0558}, {-5.2896, -.9153}, 6.4378})};
}

inline QiepCase h_minus_qiep() {
  return {rows(4, 4, {{.5164, .7087}, {.8735, .9129}, {.5603, .1868}, {.7956, .7772},
                      {.0075, .9929}, {.1133, .4817}, {.6127, .2472}, {.7811, .5111},
                      {.6889, .1625}, {.3546, .8518}, {.3008, .0542}, {.3511, .0278},
                      {.9460, .1136}, {.2419, .8099}, {.7981, .6090}, {.0543, .9904}}),
          rows(4, 4, {{0, 1.4581}, {-.5838, .7959}, {-.1266, .4063}, {.4013, 1.0946},
                      {.5838, .7959}, {0, .6088}, {-.3579, .9695}, {.1561, .9350},
                      {.1266, .4063}, {.3579, .9695}, {0, 1.4235}, {.2291, 1.4659},
                      {-.4013, 1.0946}, {-.1561, .9350}, {-.2291, 1.4659}, {0, 1.2086}}),
          rows(4, 4, {{-2.0601, 1.0247}, {2.4582, -1.0013}, {.7360, -3.2641}, {.2400, .7937},
                      {1.9948, -1.2856}, {-2.3534, 1.5410}, {-.0953, 3.2649}, {-.4525, -.9816},
                      {2.5844, .7359}, {-3.4787, -1.4732}, {-3.0772, 2.5302}, {.9751, -.7647},
                      {-.4088, -.7050}, {.6120, .9665}, {.8772, .1326}, {-.4382, .0840}}),
          rows(4, 4, {{0, 11.4611}, {1.8580, -9.8427}, {-6.8580, -10.1790}, {2.4214, -.5506},
                      {-1.8580, -9.8427}, {0, 9.7816}, {10.3049, 8.0806}, {-3.6362, .2767},
                      {6.8580, -10.1790}, {-10.3049, 8.0806}, {0, 17.1824}, {-1.0016, -3.5692},
                      {-2.4214, -.5506}, {3.6362, .2767}, {1.0016, -3.5692}, {0, 2.1237}})};
}

}  // namespace fixtures
