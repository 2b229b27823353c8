/* Compiles the public header as C and drives a tiny session through it. */
#include "ehupm/ehupm.h"

#include <stdio.h>

int main(void) {
    const char* text =
        "container(c). object(o, c). transaction(t1, o). transaction(t2, o).\n"
        "item(a, t1, 1, 1). item(b, t1, 2, 1). item(a, t2, 1, 1).\n";
    ehupm_dataset* ds = NULL;
    ehupm_result* r = NULL;
    ehupm_mine_config cfg;
    if (ehupm_dataset_parse(text, NULL, &ds) != EHUPM_OK) {
        fprintf(stderr, "parse: %s\n", ehupm_last_error());
        return 1;
    }
    ehupm_mine_config_init(&cfg);
    cfg.min_support = 2;
    if (ehupm_mine(ds, &cfg, &r) != EHUPM_OK || ehupm_result_count(r) != 1) {
        fprintf(stderr, "mine: %s\n", ehupm_last_error());
        return 1;
    }
    printf("%s\n", ehupm_result_text(r, 0));
    ehupm_result_free(r);
    ehupm_dataset_free(ds);
    return 0;
}
