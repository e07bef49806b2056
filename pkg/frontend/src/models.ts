// Document shapes exchanged with /api/v1 (snake_case mirrors of the server).

export interface ConditionDoc {
  attribute: string;
  comparator: string;
  operand: number | boolean | string;
}

export interface RuleDoc {
  id: string;
  label: string;
  value: number;
  phase: string; // "psoft" | "soft"
  conditions: ConditionDoc[];
}

export interface BandDoc {
  name: string;
  min: number;
  max: number | null;
}

export interface ClassifierDoc {
  schema_version?: string;
  id: string;
  name: string;
  description: string;
  rules: RuleDoc[];
  bands: BandDoc[];
  created?: string;
  modified?: string;
  version?: number;
}

export interface AttributeDoc {
  name: string;
  kind: string; // "integer" | "boolean" | "symbol"
  group: string; // "donor" | "recipient" | "surgery"
  unit?: string;
}

export interface SchemaDoc {
  attributes: AttributeDoc[];
}

export interface ActivatedDoc {
  rule_id: string;
  weight: number;
  phase: string;
}

export interface CaseScoreDoc {
  case_id: number;
  psoft_score: number;
  soft_score: number;
  risk: string;
  activated: ActivatedDoc[];
}

export interface ExplanationNodeDoc {
  display: string;
  atom: string | null;
  children: ExplanationNodeDoc[];
}

export interface ExplanationSetDoc {
  target: string;
  alternatives: ExplanationNodeDoc[];
  truncated: number;
}

export interface RunFailureDoc {
  case_id: number;
  error: string;
}

export interface RunDoc {
  run_id: string;
  created?: string;
  classifier_id: string;
  classifier_version: number;
  dataset_id: string;
  scores: CaseScoreDoc[];
  explanations: Record<string, ExplanationSetDoc[]>;
  failures: RunFailureDoc[];
}

export interface RunSummaryDoc {
  run_id: string;
  classifier_id: string;
  classifier_version: number;
  dataset_id: string;
  created?: string;
  cases: number;
  failures: number;
}

export interface RecordDoc {
  case_id: number;
  values: Record<string, number | boolean | string>;
}

export interface DatasetSummaryDoc {
  id: string;
  cases: number;
  created?: string;
}

export interface FindingDoc {
  code: string;
  message: string;
  rule_id?: string;
}

export interface ApplyResultDoc {
  score: CaseScoreDoc;
  explanations: ExplanationSetDoc[];
}
