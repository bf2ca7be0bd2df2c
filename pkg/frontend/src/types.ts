// Wire types for the engine API. Bodies are canonical JSON; every number
// the UI displays comes from these payloads untouched.

export type Vec3 = [number, number, number];

export interface MemberProfile {
  member_id: number;
  name: string;
  gender: "F" | "M" | "unspecified";
  grade: number;
  permanent_location: number[];
  current_location: number[] | null;
  reachable: boolean;
  available_channels: string[];
  languages: string[];
  friend_declared_by: number[];
}

export interface MembersPayload {
  tick: number;
  members: MemberProfile[];
}

export interface MemberDetail {
  member: MemberProfile;
  friendliness: number;
  socializability: number;
  neighbors: number[];
}

export interface Category {
  category_id: string;
  label: string;
}

export interface GraphEdge {
  a: number;
  b: number;
  trust_state: number;
  trust: number;
}

export interface GraphPayload {
  tick: number;
  edges: GraphEdge[];
}

export interface ResponseSource {
  responder: number;
  subject: number;
  rate: number;
  path_trust: number;
  weight: number;
  path: number[];
}

export interface AdviserEntry {
  member_id: number;
  score: number;
  sources: ResponseSource[];
}

export interface Recommendation {
  query_id: string;
  origin: number;
  category: string;
  ranked: AdviserEntry[];
  top3: number[];
}

export interface TraceResponse {
  responder: number;
  subject: number;
  rate: number;
  path_trust: number;
  return_path: number[];
}

export interface TracePayload {
  query_id: string;
  origin: number;
  category: string;
  agents_visited: number;
  messages_sent: number;
  paths: number[][];
  responses: TraceResponse[];
}

export interface FieldPole {
  member: number | null;
  sign: number;
  position: number[] | null;
  focus: number[] | null;
}

export interface FieldPayload {
  grid: { min: number[]; max: number[]; shape: number[] };
  pole: FieldPole;
  force: number[][];
  viscosity: number[];
}

export interface ProxyDescriptor {
  gender?: string;
  grade?: number;
  languages?: string[];
  declared_interests?: string[];
}

export interface RecommendationRequest {
  query_id: string;
  user: number | ProxyDescriptor;
  category: string;
  urgency?: string;
  user_languages?: string[];
  beta_override?: number | null;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
