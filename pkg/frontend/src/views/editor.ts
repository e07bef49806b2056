// Classifier editor: structured rule forms with a live lppf preview per
// rule.  The preview text always comes from the server's preview endpoint,
// so what the user sees is exactly what compile() will emit.  A dirty
// classifier is only persisted through the explicit save button.

import { ApiClient, RequestFailed } from "../api.js";
import type {
  ClassifierDoc,
  ConditionDoc,
  FindingDoc,
  RuleDoc,
  SchemaDoc,
} from "../models.js";

export function localFindings(doc: ClassifierDoc): FindingDoc[] {
  const findings: FindingDoc[] = [];
  for (const rule of doc.rules) {
    if (rule.conditions.length === 0) {
      findings.push({
        code: "no-conditions",
        message: "a rule needs at least one condition",
        rule_id: rule.id,
      });
    }
    if (!rule.id) {
      findings.push({ code: "missing-id", message: "rule id is required" });
    }
  }
  return findings;
}

export function defaultOperand(kind: string): number | boolean | string {
  if (kind === "integer") return 0;
  if (kind === "boolean") return true;
  return "";
}

export function parseOperand(kind: string, raw: string): number | boolean | string {
  if (kind === "integer") return Number.parseInt(raw, 10) || 0;
  if (kind === "boolean") return raw === "true";
  return raw;
}

export class EditorView {
  private doc!: ClassifierDoc;
  private schema!: SchemaDoc;
  private dirty = false;
  readonly element = document.createElement("section");

  constructor(
    private readonly api: ApiClient,
    private readonly navigate: (hash: string) => void = (h) => {
      location.hash = h;
    },
  ) {
    this.element.className = "editor";
  }

  async load(classifierId: string): Promise<void> {
    [this.schema, this.doc] = await Promise.all([
      this.api.getSchema(),
      this.api.getClassifier(classifierId),
    ]);
    this.dirty = false;
    this.render([]);
  }

  get classifier(): ClassifierDoc {
    return this.doc;
  }

  get isDirty(): boolean {
    return this.dirty;
  }

  private markDirty(): void {
    this.dirty = true;
    this.element.querySelector(".dirty-flag")!.textContent = "unsaved changes";
    this.refreshSaveButton();
  }

  private refreshSaveButton(): void {
    const button = this.element.querySelector<HTMLButtonElement>("button.save")!;
    button.disabled = localFindings(this.doc).length > 0;
  }

  render(findings: FindingDoc[]): void {
    const doc = this.doc;
    this.element.replaceChildren();

    const head = document.createElement("header");
    const title = document.createElement("h2");
    title.textContent = `${doc.name} (v${doc.version ?? 1})`;
    const dirtyFlag = document.createElement("span");
    dirtyFlag.className = "dirty-flag";
    dirtyFlag.textContent = this.dirty ? "unsaved changes" : "";
    head.append(title, dirtyFlag);
    this.element.append(head);

    const globalFindings = findings.filter((f) => !f.rule_id);
    if (globalFindings.length > 0) {
      this.element.append(this.findingsList(globalFindings));
    }

    const nameField = document.createElement("input");
    nameField.className = "classifier-name";
    nameField.value = doc.name;
    nameField.addEventListener("input", () => {
      doc.name = nameField.value;
      this.markDirty();
    });
    const nameLabel = document.createElement("label");
    nameLabel.append("name ", nameField);
    this.element.append(nameLabel);

    const rules = document.createElement("div");
    rules.className = "rules";
    doc.rules.forEach((rule, index) => {
      rules.append(this.ruleCard(rule, index,
        findings.filter((f) => f.rule_id === rule.id)));
    });
    this.element.append(rules);

    const addRule = document.createElement("button");
    addRule.className = "add-rule";
    addRule.textContent = "add rule";
    addRule.addEventListener("click", () => {
      doc.rules.push({
        id: `rule-${doc.rules.length + 1}`,
        label: "",
        value: 0,
        phase: "soft",
        conditions: [],
      });
      this.markDirty();
      this.render(findings);
    });

    const save = document.createElement("button");
    save.className = "save";
    save.textContent = "save";
    save.addEventListener("click", () => void this.save());

    const cloneButton = document.createElement("button");
    cloneButton.className = "clone";
    cloneButton.textContent = "clone";
    cloneButton.addEventListener("click", () => void this.clone());

    const actions = document.createElement("div");
    actions.className = "actions";
    actions.append(addRule, save, cloneButton);
    this.element.append(actions);
    this.refreshSaveButton();
  }

  private findingsList(findings: FindingDoc[]): HTMLElement {
    const list = document.createElement("ul");
    list.className = "findings";
    for (const finding of findings) {
      const item = document.createElement("li");
      item.textContent = `${finding.code}: ${finding.message}`;
      list.append(item);
    }
    return list;
  }

  private ruleCard(rule: RuleDoc, index: number, findings: FindingDoc[]): HTMLElement {
    const card = document.createElement("fieldset");
    card.className = "rule-card";
    card.dataset.ruleId = rule.id;

    const legend = document.createElement("legend");
    legend.textContent = rule.id;
    card.append(legend);
    if (findings.length > 0) {
      card.append(this.findingsList(findings));
    }

    const labelInput = document.createElement("input");
    labelInput.className = "rule-label";
    labelInput.value = rule.label;
    const valueInput = document.createElement("input");
    valueInput.className = "rule-value";
    valueInput.type = "number";
    valueInput.value = String(rule.value);
    const phaseSelect = document.createElement("select");
    phaseSelect.className = "rule-phase";
    for (const phase of ["psoft", "soft"]) {
      const option = document.createElement("option");
      option.value = phase;
      option.textContent = phase;
      option.selected = rule.phase === phase;
      phaseSelect.append(option);
    }

    const wrap = (text: string, el: HTMLElement) => {
      const label = document.createElement("label");
      label.append(text + " ", el);
      return label;
    };
    card.append(wrap("label", labelInput), wrap("value", valueInput),
      wrap("phase", phaseSelect));

    const conditions = document.createElement("div");
    conditions.className = "conditions";
    rule.conditions.forEach((condition, ci) => {
      conditions.append(this.conditionRow(rule, condition, ci));
    });
    card.append(conditions);

    const addCondition = document.createElement("button");
    addCondition.className = "add-condition";
    addCondition.textContent = "add condition";
    addCondition.addEventListener("click", () => {
      const attr = this.schema.attributes[0];
      rule.conditions.push({
        attribute: attr.name,
        comparator: attr.kind === "integer" ? ">=" : "=",
        operand: defaultOperand(attr.kind),
      });
      this.markDirty();
      this.render([]);
    });
    const removeRule = document.createElement("button");
    removeRule.className = "remove-rule";
    removeRule.textContent = "remove rule";
    removeRule.addEventListener("click", () => {
      this.doc.rules.splice(index, 1);
      this.markDirty();
      this.render([]);
    });
    card.append(addCondition, removeRule);

    const preview = document.createElement("pre");
    preview.className = "preview";
    card.append(preview);

    const refresh = () => {
      rule.label = labelInput.value;
      rule.value = Number.parseInt(valueInput.value, 10) || 0;
      rule.phase = phaseSelect.value;
      this.markDirty();
      void this.refreshPreview(rule, preview);
    };
    labelInput.addEventListener("input", refresh);
    valueInput.addEventListener("input", refresh);
    phaseSelect.addEventListener("change", refresh);

    void this.refreshPreview(rule, preview);
    return card;
  }

  private conditionRow(rule: RuleDoc, condition: ConditionDoc, index: number): HTMLElement {
    const row = document.createElement("div");
    row.className = "condition";

    const attrSelect = document.createElement("select");
    attrSelect.className = "condition-attribute";
    for (const attr of this.schema.attributes) {
      const option = document.createElement("option");
      option.value = attr.name;
      option.textContent = `${attr.name} (${attr.group})`;
      option.selected = condition.attribute === attr.name;
      attrSelect.append(option);
    }
    const comparatorSelect = document.createElement("select");
    comparatorSelect.className = "condition-comparator";
    for (const op of ["=", "!=", "<", "<=", ">", ">="]) {
      const option = document.createElement("option");
      option.value = op;
      option.textContent = op;
      option.selected = condition.comparator === op;
      comparatorSelect.append(option);
    }
    const operandInput = document.createElement("input");
    operandInput.className = "condition-operand";
    operandInput.value = String(condition.operand);

    const remove = document.createElement("button");
    remove.className = "remove-condition";
    remove.textContent = "×";
    remove.addEventListener("click", () => {
      rule.conditions.splice(index, 1);
      this.markDirty();
      this.render([]);
    });

    const kindOf = (name: string) =>
      this.schema.attributes.find((a) => a.name === name)?.kind ?? "symbol";

    const refresh = () => {
      condition.attribute = attrSelect.value;
      condition.comparator = comparatorSelect.value;
      condition.operand = parseOperand(kindOf(attrSelect.value), operandInput.value);
      this.markDirty();
      const preview = row.closest(".rule-card")?.querySelector<HTMLElement>("pre.preview");
      if (preview) {
        void this.refreshPreview(rule, preview);
      }
    };
    attrSelect.addEventListener("change", refresh);
    comparatorSelect.addEventListener("change", refresh);
    operandInput.addEventListener("input", refresh);

    row.append(attrSelect, comparatorSelect, operandInput, remove);
    return row;
  }

  async refreshPreview(rule: RuleDoc, target: HTMLElement): Promise<void> {
    if (rule.conditions.length === 0) {
      target.textContent = "(add a condition to generate code)";
      return;
    }
    try {
      target.textContent = await this.api.previewRule(rule);
    } catch (err) {
      target.textContent = `preview unavailable: ${(err as Error).message}`;
    }
  }

  async save(): Promise<void> {
    const blocking = localFindings(this.doc);
    if (blocking.length > 0) {
      this.render(blocking);
      return;
    }
    try {
      this.doc = await this.api.updateClassifier(this.doc);
      this.dirty = false;
      this.render([]);
    } catch (err) {
      if (err instanceof RequestFailed && err.error.findings.length > 0) {
        this.render(err.error.findings);
      } else {
        this.render([{ code: "save-failed", message: (err as Error).message }]);
      }
    }
  }

  async clone(): Promise<void> {
    const copy = await this.api.cloneClassifier(this.doc.id);
    this.navigate(`#/classifiers/${copy.id}`);
  }
}
