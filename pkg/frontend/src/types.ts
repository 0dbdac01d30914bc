/** Documents served by the canvas HTTP API, verbatim. */

export interface RegionInfo {
  code: string;
  name: string;
  members: string[];
}

export interface CuratedQuestion {
  id: string;
  text: string;
}

export interface Meta {
  api_version: string;
  schema_version: number;
  regions: RegionInfo[];
  curated_questions: CuratedQuestion[];
  auth_required: boolean;
}

export interface Resolution {
  target_entry_id: string;
  matched_label: string;
  suggested_zooms: Dimension[];
  seeded: boolean;
}

export interface QueryResponse {
  resolution: Resolution;
  parsed: unknown | null;
}

export type Dimension = 'logical' | 'temporal' | 'geographical';

export interface ScopeDoc {
  facets: string[];
  temporal: { start: string; end: string } | null;
  regions: string[];
}

export interface BlockDoc {
  block_id: string;
  kind: 'concept' | 'milestone' | 'regional_view' | 'narrative';
  text: string;
  dimension_tags: ScopeDoc;
  citations: string[];
  milestone_date: string | null;
  region: string | null;
}

export interface EntryDoc {
  id: string;
  title: string;
  summary: string;
  scope: ScopeDoc;
  blocks: BlockDoc[];
  status: 'seed' | 'curated';
  created_at: string;
  updated_at: string;
  children: string[];
  references: string[];
  derived_from: string | null;
}

export interface LogicalItem {
  title: string;
  entry_id: string | null;
  block_id: string | null;
  summary: string;
  citations: string[];
}

export interface TemporalItem {
  date: string;
  text: string;
  entry_id: string;
  block_id: string;
  citations: string[];
}

export interface RegionalItem {
  region: string;
  text: string;
  entry_id: string;
  block_id: string;
  citations: string[];
}

export type ZoomResult = LogicalItem[] | TemporalItem[] | Record<string, RegionalItem[]>;

export interface ZoomResponse<R extends ZoomResult = ZoomResult> {
  entry_id: string;
  dimension: Dimension;
  result: R;
}

export interface Badge {
  combined_score: number;
  content_score: number;
  report_id: string;
  source_id: string;
  evidence: Record<string, number>;
  narrative: Record<string, number>;
  profile_before: Record<string, number>;
}

export interface SourceProfileDoc {
  source_id: string;
  coordinates: Record<string, number>;
  report_count: number;
  last_updated: string;
}

export interface SourceInfo {
  source: { id: string; name: string; kind: string; affiliations: string[] };
  profile: SourceProfileDoc;
}

export type NodeKind =
  | 'query'
  | 'content_view'
  | 'zoom'
  | 'source_evaluation'
  | 'source_exclusion'
  | 'annotation';

export interface NodeDoc {
  id: string;
  kind: NodeKind;
  timestamp: string;
  payload: Record<string, unknown>;
}

export type EdgeDoc = [string, string, string];

export interface Exclusion {
  source_id: string;
  note: string;
}

export interface SessionDoc {
  id: string;
  author: string;
  family_id: string;
  status: 'live' | 'closed';
  parent_version: [string, number] | null;
  branch_base: string | null;
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  current_node: string | null;
  exclusions: Exclusion[];
  created_at: string;
}

export interface PathwayDoc {
  id: string;
  version: number;
  parent_version: [string, number] | null;
  author: string;
  status: 'archived';
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  exclusions: Exclusion[];
  lineage_authors: string[];
  created_at: string;
}

export interface PathwaySummary {
  id: string;
  version: number;
  author: string;
  parent_version: [string, number] | null;
  node_count: number;
  created_at: string;
}

export interface Suggestion {
  signature: string;
  kind: NodeKind;
  payload: Record<string, unknown>;
  count: number;
}

export interface EventResponse {
  session_id: string;
  node: NodeDoc;
  current_node: string;
}

export interface ApiError {
  error: { code: string; message: string };
}
