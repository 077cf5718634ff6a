#include <math.h>
#include <stdio.h>
#include "tfloc.h"

int main(void) {
    TflocParams params = {1, 2.0, 3.0, 1.0, 1.0};
    TflocDecision decision;
    if (tfloc_classify(&params, &decision) != TFLOC_STATUS_OK) return 1;
    if (decision.regime != TFLOC_REGIME_P_DOMINANT) return 2;

    TflocOptimum *opt = NULL;
    params.b = 0.9;
    if (tfloc_optimize(&params, 1e-9, &opt) != TFLOC_STATUS_OK) return 3;
    TflocOptimumInfo info;
    if (tfloc_optimum_info(opt, &info) != TFLOC_STATUS_OK) return 4;
    if (!info.has_multipliers || !(info.lambda1 > 0.0) || !(info.lambda2 > 0.0)) return 5;
    double r[5], f[5];
    if (tfloc_optimum_profile(opt, 1.0, 5, r, f) != TFLOC_STATUS_OK) return 6;
    if (f[0] != info.t_end) return 7;
    tfloc_optimum_free(opt);

    params.p = 0.5;
    if (tfloc_classify(&params, &decision) != TFLOC_STATUS_INVALID_ARGUMENT) return 8;
    char msg[128];
    if (tfloc_last_error_message(msg, sizeof msg) == 0) return 9;
    printf("bound %.12f\n", info.bound);
    return 0;
}
