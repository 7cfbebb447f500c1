/* (D + 50)u = 50 with u(-1) = 0, whose solution is 1 - exp(-50(y + 1)). */
#include <math.h>
#include <stdio.h>

#include "specint.h"

#define M 64

static int check(SibStatus s, const char *what) {
    if (s != SIB_STATUS_OK) {
        fprintf(stderr, "%s: status %d: %s\n", what, (int)s, sib_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    double y[M + 1], f[M + 1];
    if (check(sib_grid_points(M, y, M + 1), "grid")) return 1;
    for (int j = 0; j <= M; j++) f[j] = 50.0;

    double a = -50.0;
    SibCondition bc = {-1, 0, 0.0};
    SibSolver *solver = NULL;
    if (check(sib_solver_new(&a, 1, NULL, 0, &bc, 1, M, &solver), "solver")) return 1;

    SibSolution *sol = NULL;
    if (check(sib_solver_solve(solver, f, M + 1, &sol), "solve")) return 1;

    double worst = 0.0;
    for (int k = 0; k <= 200; k++) {
        double t = -1.0 + k / 100.0, u;
        if (check(sib_solution_eval(sol, t, &u), "eval")) return 1;
        double e = fabs(u - (1.0 - exp(-50.0 * (t + 1.0))));
        if (e > worst) worst = e;
    }
    printf("specint %s: max error %.3e at M = %zu\n", sib_version(), worst, sib_solution_order(sol));

    /* two conditions for a first-order operator */
    SibCondition two[2] = {{-1, 0, 0.0}, {1, 0, 1.0}};
    SibSolver *bad = NULL;
    SibStatus s = sib_solver_new(&a, 1, NULL, 0, two, 2, M, &bad);
    printf("rejected: status %d, %s\n", (int)s, sib_last_error());

    sib_solution_free(sol);
    sib_solver_free(solver);
    return worst < 1e-12 && s == SIB_STATUS_INVALID_ARGUMENT && bad == NULL ? 0 : 1;
}
