/** Shapes of the JSON the API serves (apiVersion "1", camel case). */

export interface IntervalJson {
  start: string;
  end: string | null;
}

export interface VersionRefJson {
  versionIndex: number;
  captureDatetime: string;
  ts: string;
  uriM: string | null;
  archive: string;
  replayUrl: string;
}

export interface SnippetTokenJson {
  text: string;
  mark: "kept" | "added" | "deleted" | "ellipsis";
}

export interface LifespanJson {
  firstVersion: number;
  lastVersion: number;
  added: IntervalJson | null;
  removed: IntervalJson | null;
}

export interface SearchHitJson {
  canonicalUrl: string;
  chainId: number;
  transitionIndex: number;
  preChange: VersionRefJson;
  postChange: VersionRefJson;
  additionVersion: VersionRefJson | null;
  changeInterval: IntervalJson;
  lifespan: LifespanJson | null;
  partial: boolean;
  delta: number;
  snippet: SnippetTokenJson[];
  score: unknown[];
  links: {
    replayPre: string;
    replayPost: string;
    replayAddition: string | null;
    slide: string;
    animate: string;
  };
}

export interface SearchResponse {
  apiVersion: string;
  query: Record<string, unknown>;
  total: number;
  page: number;
  pageSize: number;
  hits: SearchHitJson[];
}

export interface VersionsResponse {
  apiVersion: string;
  canonicalUrl: string;
  chainId: number;
  first: number;
  last: number;
  identicalSkipMap: boolean[];
  versions: {
    index: number;
    validity: IntervalJson;
    members: {
      ts: string;
      captureDatetime: string;
      uriM: string | null;
      status: number;
      archive: string;
      replayUrl: string;
    }[];
  }[];
}

export interface SlideRegionJson {
  kind: "keep" | "delete" | "insert" | "replace";
  aTokens: string[];
  bTokens: string[];
}

export interface SlideResponse {
  apiVersion: string;
  canonicalUrl: string;
  pair: [number, number];
  identical: boolean;
  first: number;
  last: number;
  count: number;
  regions: SlideRegionJson[];
}

export type ChangeType =
  | "added_term"
  | "deleted_term"
  | "added_phrase"
  | "deleted_phrase";

export interface SearchParams {
  type: ChangeType;
  q: string;
  partial: boolean;
  from?: string;
  to?: string;
  domain?: string;
  page?: number;
}
