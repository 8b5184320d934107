#include "h1spec/quadrature.hpp"

namespace h1spec {

// Abscissas/weights for 16-point Gauss-Legendre, positive half.
const double* GL16::nodes() {
  static const double n[8] = {
      0.09501250983763744018531934, 0.28160355077925891323046050,
      0.45801677765722738634241944, 0.61787624440264374844667176,
      0.75540440835500303389510119, 0.86563120238783174388046789,
      0.94457502307323257607798842, 0.98940093499164993259615417};
  return n;
}

const double* GL16::weights() {
  static const double w[8] = {
      0.18945061045506849628539672, 0.18260341504492358886676366,
      0.16915651939500253818931208, 0.14959598881657673208150173,
      0.12462897125553387205247628, 0.09515851168249278480992510,
      0.06225352393864789286284384, 0.02715245941175409485178057};
  return w;
}

}  // namespace h1spec
