// Explanation-template rendering for the audit page: the same named-placeholder
// substitution the server applies, so the page shows each template verbatim.

export type TemplateMap = Record<string, string>;

export interface TemplateValues {
  face?: string;
  row?: string;
  col?: string;
  place?: string;
}

export function fillTemplate(template: string, values: TemplateValues): string {
  return template.replace(/\{(face|row|col|place)\}/g, (token, key: keyof TemplateValues) => {
    const value = values[key];
    if (value === undefined) {
      throw new Error(`template needs ${String(token)}`);
    }
    return value;
  });
}

// Sample values for the audit page. Second-card hints disclose a single line,
// so their sample place is a bare row; first-card samples show the full cell.
export function sampleValuesFor(caseName: string): TemplateValues {
  return {
    face: "shark",
    row: "1",
    col: "2",
    place: caseName.startsWith("second_") ? "row 1" : "row 1 and col 2",
  };
}

export function renderAuditEntries(templates: TemplateMap): { case: string; text: string }[] {
  return Object.keys(templates)
    .sort()
    .map((key) => ({
      case: key,
      text: fillTemplate(templates[key] as string, sampleValuesFor(key)),
    }));
}
