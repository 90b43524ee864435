#include <stdio.h>
#include <string.h>

#include "spectral_torsion.h"

int main(int argc, char **argv) {
    if (argc != 3) {
        fprintf(stderr, "usage: smoke <passing scenario> <failing scenario>\n");
        return 2;
    }
    st_scenario *scenario = NULL;
    st_report *report = NULL;
    if (st_scenario_from_file(argv[1], &scenario) != ST_STATUS_OK) {
        fprintf(stderr, "load: %s\n", st_last_error());
        return 1;
    }
    if (st_run_report(scenario, 1e-9, &report) != ST_STATUS_OK || st_report_pass(report) != 1) {
        fprintf(stderr, "run: %s\n", st_last_error());
        return 1;
    }
    st_report_free(report);
    st_scenario_free(scenario);

    if (st_scenario_from_file(argv[2], &scenario) != ST_STATUS_OK ||
        st_run_report(scenario, 1e-9, &report) != ST_STATUS_OK) {
        fprintf(stderr, "failing scenario: %s\n", st_last_error());
        return 1;
    }
    size_t failed = 0;
    for (size_t i = 0; i < st_report_diff_count(report); i++) {
        char *name = NULL;
        int pass = 0;
        if (st_report_diff(report, i, &name, &pass) != ST_STATUS_OK) {
            return 1;
        }
        if (!pass) {
            printf("%s\n", name);
            failed++;
        }
        st_string_free(name);
    }
    st_report_free(report);
    st_scenario_free(scenario);

    if (st_scenario_from_json("{\"schema\": 1}", &scenario) != ST_STATUS_PARSE) {
        return 1;
    }
    printf("version %s, %zu failing comparisons\n", st_version(), failed);
    return failed == 1 ? 0 : 1;
}
