#include <stdio.h>
#include <string.h>
#include "valivt.h"

int main(void) {
    ValivtField *field = NULL;
    ValivtPoly *poly = NULL;
    char *json = NULL;
    if (valivt_field_new("puiseux", &field) != VALIVT_STATUS_OK) return 10;
    if (valivt_poly_parse(field, "X^2 - t", &poly) != VALIVT_STATUS_OK) return 11;
    if (valivt_ivt_solve_json(field, poly, "t", "1", "1/2", &json) != VALIVT_STATUS_OK) return 12;
    if (strstr(json, "\"c\":\"t^(1/4)\"") == NULL) return 13;
    printf("%s\n", json);
    valivt_string_free(json);
    if (valivt_poly_parse(field, "X^^2", &poly) != VALIVT_STATUS_INPUT) return 14;
    if (strncmp(valivt_last_error(), "SyntaxError", 11) != 0) return 15;
    valivt_poly_free(poly);
    valivt_field_free(field);
    return 0;
}
