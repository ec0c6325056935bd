#include <math.h>
#include <stdio.h>
#include "rindler_gate.h"

int main(void) {
    RgParams *params = NULL;
    if (rg_params_new(1.0, 1.0, 1.0, &params) != RG_STATUS_OK) return 1;

    RgComplex a;
    if (rg_amplitude(params, RG_PATHWAY_GEG, RG_CHANNEL_RR, 1.0, &a) != RG_STATUS_POLE) return 2;
    if (rg_last_error_message()[0] == '\0') return 3;

    RgResonantState *state = NULL;
    if (rg_resonant_state_new(params, 0.5, 0.0, &state) != RG_STATUS_OK) return 4;
    RgDensity *rho = NULL;
    if (rg_reduced_state_new(state, RG_MODE_A_PLUS, true, -1, &rho) != RG_STATUS_OK) return 5;

    double zero = 0.0, w = 0.0;
    if (rg_density_wigner(rho, &zero, 1, &zero, 1, &w, NULL) != RG_STATUS_OK) return 6;
    if (fabs(w + 1.0 / M_PI) > 1e-12) return 7;

    rg_density_free(rho);
    rg_resonant_state_free(state);
    rg_params_free(params);
    printf("ok\n");
    return 0;
}
